"""
Power sums over a prime field
=============================

Every row of a polynomial instance is killed by the vector
v[(alpha, beta)] = beta because the power sums of a prime field vanish
below degree q - 1.
"""

from permpuzzle import Field, smallest_prime_at_least

# the field size used for lambda = 4
q = smallest_prime_at_least(4**2)
F = Field(q)
print("q =", q)

# sum of alpha**c over the field, for every exponent up to q - 1
for c in range(q):
    print(f"  sum alpha^{c:<2d} = {F.power_sum(c)}")

# so any polynomial of degree < q - 1 sums to zero over the whole field
coeffs = [3, 1, 4, 1, 5]
total = sum(sum(cj * F.pow(x, j) for j, cj in enumerate(coeffs)) for x in F) % q
print("sum_x p(x) =", total)
