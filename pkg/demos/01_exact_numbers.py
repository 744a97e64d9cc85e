"""Exact signed square roots: the number type every coefficient lives in."""

from fractions import Fraction

from spinstat.exact_number import RadicalSum, SignedSqrtRational, add, format_value, multiply, parse, to_float

half = SignedSqrtRational.sqrt(Fraction(1, 2))
third = SignedSqrtRational.sqrt(Fraction(1, 3), sign=-1)
print("1/sqrt2      ", format_value(half), to_float(half))
print("-1/sqrt3     ", format_value(third), to_float(third))

# products never leave the type
print("product      ", format_value(multiply(half, third)))

# sums only when the radicals line up: sqrt2 + sqrt8 = 3 sqrt2
print("sqrt2+sqrt8  ", format_value(add(parse("sqrt(2)"), parse("sqrt(8)"))))

# sqrt2 + sqrt3 is not a single root; the wider field keeps it exact
mixed = RadicalSum.coerce(parse("sqrt(2)")) + RadicalSum.coerce(parse("sqrt(3)"))
print("sqrt2+sqrt3  ", mixed, float(mixed))
print("times conj.  ", mixed * (RadicalSum.coerce(parse("sqrt(3)")) - RadicalSum.coerce(parse("sqrt(2)"))))
