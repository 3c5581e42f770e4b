"""Generate molecular integral fixtures in the spin-orbital JSON format read by
`gapscope_core::models::FermionIntegrals`.

Run once offline; output lands in fixtures/molecules/<name>/.

    python3 tools/gen_molecule_fixtures.py

Conventions written into every file:
  * spin orbitals interleaved: P = 2*p + s (s = 0 alpha, 1 beta), p an RHF
    canonical molecular orbital;
  * H = E_nuc + sum_PQ h_PQ c_P^+ c_Q + 1/2 sum_PQRS h_PQRS c_P^+ c_Q^+ c_R c_S
    with h_PQRS = (PS|QR) in chemist notation.
"""
import json
import os

import numpy as np
from pyscf import ao2mo, fci, gto, scf

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures", "molecules")

MOLECULES = {
    "h2": {
        "atom": "H",
        "basis": "sto-3g",
        "bonds": [0.3, 0.4, 0.5, 0.6, 0.7, 0.74, 0.8, 0.9, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0, 2.2, 2.5],
    },
    "he2": {
        "atom": "He",
        "basis": "6-31g",
        "bonds": [1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 3.5, 4.0],
    },
}

TOL = 1e-12
DISPLAY = {"h2": "H2", "he2": "He2"}


def spin_orbital_integrals(h1, eri):
    n = h1.shape[0]
    ns = 2 * n
    one = []
    for P in range(ns):
        for Q in range(ns):
            if P % 2 != Q % 2:
                continue
            v = h1[P // 2, Q // 2]
            if abs(v) > TOL:
                one.append([P, Q, float(v)])
    two = []
    for P in range(ns):
        for Q in range(ns):
            for R in range(ns):
                for S in range(ns):
                    if P % 2 != S % 2 or Q % 2 != R % 2:
                        continue
                    v = eri[P // 2, S // 2, Q // 2, R // 2]
                    if abs(v) > TOL:
                        two.append([P, Q, R, S, float(v)])
    return one, two


def build(name, spec, bond):
    mol = gto.M(
        atom=f"{spec['atom']} 0 0 0; {spec['atom']} 0 0 {bond}",
        basis=spec["basis"],
        unit="Angstrom",
        verbose=0,
    )
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    c = mf.mo_coeff
    h1 = c.T @ mf.get_hcore() @ c
    n = c.shape[1]
    eri = ao2mo.restore(1, ao2mo.kernel(mol, c), n)
    e_fci, _ = fci.FCI(mf).kernel()
    one, two = spin_orbital_integrals(h1, eri)
    return {
        "molecule": DISPLAY[name],
        "bond_length_angstrom": bond,
        "basis": spec["basis"],
        "n_electrons": int(mol.nelectron),
        "convention": "interleaved spin orbitals P=2p+s; two_body value h_PQRS=(PS|QR) multiplies 1/2 c_P^+ c_Q^+ c_R c_S",
        "hf_energy": float(mf.e_tot),
        "fci_energy": float(e_fci),
        "n_orbitals": 2 * n,
        "nuclear_repulsion": float(mol.energy_nuc()),
        "one_body": one,
        "two_body": two,
    }


def dump_fixture(data):
    lines = ["{"]
    keys = list(data.keys())
    for k in keys:
        v = data[k]
        if isinstance(v, list):
            rows = ",\n".join("  " + json.dumps(r) for r in v)
            text = f' "{k}": [\n{rows}\n ]'
        else:
            text = f" {json.dumps(k)}: {json.dumps(v)}"
        lines.append(text + ("," if k != keys[-1] else ""))
    lines.append("}")
    return "\n".join(lines) + "\n"


def main():
    for name, spec in MOLECULES.items():
        out = os.path.join(ROOT, name)
        os.makedirs(out, exist_ok=True)
        index = {"molecule": DISPLAY[name], "basis": spec["basis"], "geometries": []}
        for bond in spec["bonds"]:
            data = build(name, spec, bond)
            fname = f"{name}_{bond:.3f}.json"
            with open(os.path.join(out, fname), "w") as f:
                f.write(dump_fixture(data))
            index["geometries"].append({"bond_length_angstrom": bond, "file": fname})
            print(name, bond, data["n_orbitals"], data["fci_energy"])
        with open(os.path.join(out, "index.json"), "w") as f:
            json.dump(index, f, indent=2)
            f.write("\n")


if __name__ == "__main__":
    main()
