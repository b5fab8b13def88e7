#!/usr/bin/env python3
"""Smoke test for the annrel Python extension.

Expects the cdylib to have been built already:

    cargo build --release -p annrel-python

The script copies the shared library next to itself as `annrel.so` (so the
interpreter can import it) and exercises the main types end to end.
"""

import pathlib
import shutil
import sys

HERE = pathlib.Path(__file__).resolve().parent
ROOT = HERE.parent


def ensure_module() -> None:
    so = HERE / "annrel.so"
    candidates = [
        ROOT / "target" / profile / "libannrel.so"
        for profile in ("release", "debug")
    ]
    built = next((c for c in candidates if c.exists()), None)
    if built is not None and (
        not so.exists() or built.stat().st_mtime > so.stat().st_mtime
    ):
        shutil.copy2(built, so)
    if not so.exists():
        sys.exit(
            "annrel.so not found; build it first with "
            "`cargo build --release -p annrel-python`"
        )
    sys.path.insert(0, str(HERE))


ensure_module()

import annrel  # noqa: E402

# Algebra layer.
a1 = annrel.Algebra("A1")
assert a1.dim() == 3
assert a1.rank() == 1
assert a1.dual_coxeter() == 2
assert a1.casimir_eigenvalue([1]) == "4"
assert a1.generator_names() == ["h1", "e[1]", "f[1]"]

a2 = annrel.Algebra("A2")
assert a2.dim() == 8
assert a2.dual_coxeter() == 3
assert a2.theta() == [1, 1]
assert a2.check_lemma_5_2()
assert a2.distinguished_indices() == [0, 1]
weights = dict(a2.dot_action_weights(1))
assert set(weights) == {0, 1}

try:
    a1.check_lemma_5_2()
except ValueError:
    pass
else:
    sys.exit("expected the A1 exclusion to raise")

# Vacuum module layer.
mod = annrel.VacuumModule("A1", 1)
assert mod.level() == 1
assert [mod.slice_dim(d) for d in range(6)] == [1, 3, 9, 22, 51, 108]
assert mod.relation_space_dim() == 5

names = mod.generator_names()
e = names.index("e[1]")
f = names.index("f[1]")

vac = mod.vacuum()
assert not vac.is_zero()
assert vac.degree() == 0

# e(1) f(-1) |0> = k |0> at level 1.
fv = mod.act(f, -1, vac)
assert mod.act(e, 1, fv) == vac
assert mod.act(e, 2, vac).is_zero()

# Translation shifts the mode: D e(-1)|0> = e(-2)|0>.
ev = mod.act(e, -1, vac)
assert mod.translate(ev) == mod.act(e, -2, vac)

# Field coefficients reproduce the current modes: (e(-1)|0>)_n w = e(n) w.
w = mod.act(f, -2, vac)
for n in (-2, -1, 0, 1):
    assert mod.field_coefficient(ev, n, w) == mod.act(e, n, w)

# The bracket of generator states is the shifted commutator.
h = names.index("h1")
assert mod.bracket(ev, mod.act(f, -1, vac)) == mod.act(h, -2, vac)

# Kernel dimensions of the induction map (degree 3 holds the quadratic
# relations, one per dimension of the relation space).
assert mod.kernel_dim(2) == 0
assert mod.kernel_dim(3) == 5

# Claim registry and verification runs.
registry = annrel.claims_registry()
assert len(registry) >= 10
ids = {entry[0] for entry in registry}
assert "thm-6.2" in ids and "prop-4.1" in ids

report = annrel.verify("prop-4.1", "A1", 1, 3)
assert report["verdict"] == "pass"
assert report["schema"] == 1

report = annrel.verify("sl2-identity-s6", "A1", 1, 4)
assert report["verdict"] == "pass"
assert report["claim"] == "sl2-identity-§6"

report = annrel.verify("thm-6.2", "A1", 1, 5)
assert report["verdict"] == "pass"
assert [row["degree"] for row in report["per_degree"]] == [3, 4, 5]
assert all(row["lhs_dim"] == row["rhs_dim"] for row in report["per_degree"])

try:
    annrel.verify("thm-6.2", "A1", 1, 1)
except ValueError as err:
    assert "degree" in str(err)
else:
    sys.exit("expected a degree validation error")

print("smoke test OK")
