# Catalog loading, grid reproduction and report rendering
