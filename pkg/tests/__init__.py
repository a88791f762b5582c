# Test package for the quadratic algebra toolkit
