# Function fields, Ore polynomials, Drinfeld modules and torsion
