# Exact arithmetic: fields, polynomials, linear algebra, matrix groups
