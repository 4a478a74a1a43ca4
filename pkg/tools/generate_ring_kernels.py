"""Regenerate the hard-coded ring kernel derivatives and Laurent tables.

Run from the repository root:

    python tools/generate_ring_kernels.py

Prints the function bodies and Laurent coefficients that live in
src/magchain/_ring_kernels.py, and verifies the zero-kernel identity
symbolically.  Requires sympy (development-time dependency only).
"""

import sympy as sp

t = sp.symbols("t")
h = sp.sin(t / 2)
BASE = {
    "00": (115 + 76 * sp.cos(t) + sp.cos(2 * t)) / (128 * h**5),
    "01": 3 * (22 * sp.sin(t) + sp.sin(2 * t)) / (64 * h**5),
    "11": 3 * (-35 + 3 * sp.cos(2 * t)) / (128 * h**5),
    "02": (3 + sp.cos(t)) / (8 * h**3),
    "12": 3 * (-6 * sp.sin(t) + sp.sin(2 * t)) / (32 * h**5),
    "22": (3 - sp.cos(t)) / (8 * h**3),
}


def main():
    ident = (
        BASE["00"]
        + sp.diff(BASE["01"], t)
        - sp.diff(BASE["11"], t, 2)
        + sp.diff(BASE["02"], t, 2)
        - sp.diff(BASE["12"], t, 3)
        + sp.diff(BASE["22"], t, 4)
    )
    print("# zero-kernel identity simplifies to:", sp.simplify(ident))

    for nm, expr in BASE.items():
        for order in range(5):
            d = sp.diff(expr, t, order) if order else expr
            d = sp.simplify(sp.expand_trig(sp.simplify(d)))
            code = sp.pycode(d).replace("math.", "")
            print(f"def k{nm}_d{order}(t):\n    return {code}\n")

    print("LAURENT = {")
    for nm, expr in BASE.items():
        ser = sp.series(expr, t, 0, 11).removeO()
        poly = sp.Poly(sp.expand(ser * t**5), t)
        coeffs = {p - 5: sp.nsimplify(c) for (p,), c in poly.terms()}
        print(f'    "{nm}": {dict(sorted(coeffs.items()))},')
    print("}")


if __name__ == "__main__":
    main()
