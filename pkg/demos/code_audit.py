"""Inspect the built-in stabilizer codes and their derived structure.

For each code: generators, exhaustively-found minimum-weight logical
operators, the Knill-Laflamme residual at the correctable error weight, and
the size of the syndrome -> correction table.
"""

from stabdec import codes

for name in codes.BUILTIN_CODE_NAMES:
    code = codes.builtin_code(name)
    t = (code.d - 1) // 2
    print(f"{name}: [[{code.n},1,{code.d}]]")
    for i, s in enumerate(code.stabilizers, start=1):
        print(f"  S_{i:<2} = {s.letters()}")
    print(f"  X_L = {code.logical_x.letters()}  (weight {code.logical_x.weight})")
    print(f"  Z_L = {code.logical_z.letters()}  (weight {code.logical_z.weight})")
    print(f"  knill-laflamme residual (weight <= {t}): {codes.kl_check(code, t):.2e}")
    print(f"  correction table: {len(code.correction_table)} syndromes")
    print()
