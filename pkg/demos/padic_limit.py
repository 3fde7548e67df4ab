"""Normalised Hecke images of zeta(cE) converge 5-adically to a multiple of the newform."""

from weierstrass_mock.curves import CURVE_11A1, CURVE_361
from weierstrass_mock.hecke import padic_congruence_check, s_p_digits

for E, c in ((CURVE_361, -2), (CURVE_11A1, None)):
    print(E.label)
    for n in (1, 2, 3):
        r = padic_congruence_check(E, 5, n, n, constant=c)
        lead = ", ".join(f"{v} q^{k}" for k, v in list(r.witness.items())[:3])
        print(f"  n={n}  c={r.constant}  min v_5={r.min_valuation}  passed={r.passed}  {lead}")

digits, residues = s_p_digits(CURVE_11A1, 5, 4)
print("11a1 digits of the limit (base 5):", digits)
print("residues c_n mod 5^n:", residues)
