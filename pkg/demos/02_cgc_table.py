"""Clebsch-Gordan tables from the highest-weight recurrence."""

from spinstat import build_table, highest_weight_coeffs, racah_oracle
from spinstat.cgc_engine import check_coefficient_symmetry, check_orthogonality
from spinstat.exact_number import HalfInt

# the top row of each total spin j for s = 1
for j in (2, 1, 0):
    hw = highest_weight_coeffs(2, j)
    print(f"j={j}: a_n =", ", ".join(str(a) for a in hw.a))

table = build_table(2)
for tj, tm, a, b in table.sorted_keys():
    print(f"  C({HalfInt(tj)},{HalfInt(tm)}; {HalfInt(a)},{HalfInt(b)}) = {table.entries[(tj, tm, a, b)]}")

# a bigger one, checked three ways
big = build_table(9)
print("s=9/2 entries:", len(big))
print("symmetry:", check_coefficient_symmetry(big).passed, " orthogonality:", check_orthogonality(big).passed)
print("oracle agrees on C(3,1;1/2,1/2):", racah_oracle(9, 3, 1, "1/2", "1/2") == big.get(6, 2, 1, 1))
