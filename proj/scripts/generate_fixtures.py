#!/usr/bin/env python3
"""Regenerate the bundled FCIDUMP fixtures and their reference energies.

Requires pyscf. Writes fixtures/<molecule>/<bond_length>.fcidump and
fixtures/reference_energies.json (RHF and FCI energies computed by pyscf,
used by the test suite as an external oracle).
"""
import json
import os
import sys

from pyscf import fci, gto, scf
from pyscf.tools import fcidump

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")


def h2(r):
    return [("H", (0, 0, 0)), ("H", (0, 0, r))]


def h4(r):
    return [("H", (0, 0, i * r)) for i in range(4)]


def lih(r):
    return [("Li", (0, 0, 0)), ("H", (0, 0, r))]


MOLECULES = {
    "H2": (h2, [0.7414]),
    "H4": (h4, [0.6, 0.9, 1.2, 1.5, 1.8, 2.1]),
    "LiH": (lih, [1.2, 1.6, 2.4]),
}


def main():
    refs = {}
    for name, (geom, bonds) in MOLECULES.items():
        os.makedirs(os.path.join(ROOT, name), exist_ok=True)
        refs[name] = {}
        for r in bonds:
            mol = gto.M(atom=geom(r), basis="sto-3g", unit="Angstrom", verbose=0)
            mf = scf.RHF(mol).run(conv_tol=1e-12)
            path = os.path.join(ROOT, name, f"{r}.fcidump")
            fcidump.from_scf(mf, path, tol=1e-14)
            e_fci = fci.FCI(mf).kernel()[0]
            refs[name][f"{r}"] = {"hf": mf.e_tot, "fci": e_fci}
            print(name, r, mf.e_tot, e_fci, file=sys.stderr)
    with open(os.path.join(ROOT, "reference_energies.json"), "w") as f:
        json.dump(refs, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
