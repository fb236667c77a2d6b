"""Regenerate lfunction_oracle.json with mpmath (50 significant digits).

Characters are given by their values on residues 0..q-1 so the Rust side can
locate the matching character in its own table.
"""
import json
from mpmath import mp, mpf, mpc, dirichlet, loggamma, exp, pi, sqrt, findroot, arg

mp.dps = 50

CHARS = {
    "mod4_real": (4, [0, 1, 0, -1]),
    "mod3_real": (3, [0, 1, -1]),
    "mod5_quartic": (5, [0, 1, 1j, -1j, -1]),
    "mod8_real": (8, [0, 1, 0, -1, 0, -1, 0, 1]),
}


def root_number(q, vals):
    tau = sum(mpc(vals[a]) * exp(2j * pi * a / q) for a in range(q))
    delta = 0 if abs(mpc(vals[q - 1]) - 1) < 1e-20 else 1
    return tau / ((1j) ** delta * sqrt(q)), delta


def hardy_z(q, vals, t):
    eps, delta = root_number(q, vals)
    s = mpf(1) / 2 + 1j * t
    theta = (t / 2) * mp.log(q / pi) + loggamma((s + delta) / 2).imag
    rot = exp(-1j * arg(eps) / 2) * exp(1j * theta)
    return (rot * dirichlet(s, [mpc(v) for v in vals])).real


def zeros(q, vals, lo, hi, step=0.02):
    out = []
    t = mpf(lo)
    prev = hardy_z(q, vals, t)
    while t < hi:
        t2 = t + step
        cur = hardy_z(q, vals, t2)
        if prev == 0 or prev * cur < 0:
            out.append(findroot(lambda x: hardy_z(q, vals, x), (t, t2), solver="anderson"))
        t, prev = t2, cur
    return out


def main():
    data = {}
    for name, (q, vals) in CHARS.items():
        chi = [mpc(v) for v in vals]
        entry = {
            "q": q,
            "values_re": [float(mpc(v).real) for v in vals],
            "values_im": [float(mpc(v).imag) for v in vals],
            "l_values": [],
            "zeros": [],
        }
        for t in [0, 1, 5, 10, 25.5, -3]:
            v = dirichlet(mpf(1) / 2 + 1j * mpf(t), chi)
            entry["l_values"].append({"t": t, "re": float(v.real), "im": float(v.imag)})
        entry["zeros"] = [float(z) for z in zeros(q, vals, -20, 20)]
        data[name] = entry
    with open("lfunction_oracle.json", "w") as fh:
        json.dump(data, fh, indent=1)


if __name__ == "__main__":
    main()
