# Exact arithmetic, forms, classification, contractions and Poisson brackets
