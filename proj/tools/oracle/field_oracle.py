#!/usr/bin/env python3
"""Regenerate data/bases.json from data/fields.json with PARI/GP (cypari2).

For every field row this writes a reduced sextic p_K for K = F(sqrt(d_k)),
an integral basis of O_K over the power basis of a root of p_K, the
element sqrt(d_k) in that power basis, and a few polarization elements
xi found independently of the C++ search.  Nothing in the library imports
this script; it only produces data that the tests cross-check.

    pip install --only-binary=:all: cypari2 cysignals
    python3 tools/oracle/field_oracle.py data/fields.json data/bases.json
"""
import json
import sys

import cypari2

pari = cypari2.Pari()
pari.allocatemem(10**9)
pari.set_real_precision(60)

GP = r"""
conjaut(nf) = {
  my(r = polroots(nf.pol)[1]);
  foreach(nfgaloisconj(nf), s, if(abs(subst(lift(s), variable(nf.pol), r) - conj(r)) < 1e-30, return(s)));
  error("no conjugation");
}
\\ E[i,j] = Tr(xi * b_i * conj(b_j)) on the integral basis
rform(nf, s, xi) = {
  my(n = poldegree(nf.pol), zk = nf.zk);
  matrix(n, n, i, j, nfelttrace(nf, nfeltmul(nf, xi, nfeltmul(nf, zk[i], nfgaloisapply(nf, s, zk[j])))));
}
xisearch(nf, sq, radius, maxn) = {
  my(n = poldegree(nf.pol), s = conjaut(nf), T, D, C, K, res = List(), emb = polroots(nf.pol));
  T = matrix(n, n, i, j, nfelttrace(nf, nfeltmul(nf, nf.zk[i], nf.zk[j])));
  D = T^-1;                                  \\ columns: trace-dual basis on the integral basis
  C = matrix(n, n, i, j, 0);
  for(i = 1, n, C[, i] = D^-1 * nfgaloisapply(nf, s, D[, i]));
  K = matkerint(C + 1);
  forvec(c = vector(#K, k, [-radius, radius]),
    if(c == 0, next);
    my(xi = D * (K * c~), E = rform(nf, s, xi), xa, phi, sg);
    if(abs(matdet(E)) != 1, next);
    xa = lift(nfbasistoalg(nf, xi));
    phi = select(k -> imag(subst(xa, variable(nf.pol), emb[k])) > 0, [1..n]);
    sg = Set(apply(k -> sign(imag(subst(sq, variable(nf.pol), emb[k]))), phi));
    listput(res, [xi, #sg == 2]);
    if(#res >= maxn, break));
  Vec(res);
}
fieldrow(pF, dk, radius, maxn, wantxi) = {
  my(pK = polredabs(polcompositum(pF, x^2 - dk)[1]), nf = nfinit(pK), sq, xs = []);
  my(w = varhigher("w")); sq = lift(nfbasistoalg(nf, nfroots(nf, w^2 - dk)[1]));
  if(wantxi, xs = xisearch(nf, sq, radius, maxn));
  [pK, nf.disc, nf.zk, sq, xs];
}
"""
for stmt in GP.split("\n}\n"):
    stmt = stmt.strip()
    if stmt:
        pari(stmt if stmt.endswith("}") else stmt + "\n}")


def coeffs(pol, n):
    return [str(pari.polcoef(pol, k, "x")) for k in range(n)]


def field_row(row, radius=2, maxn=6):
    pF = "+".join(f"({c})*x^{k}" for k, c in enumerate(row["p_F"]))
    pK, disc, zk, sq, xs = pari(f"fieldrow({pF}, {row['d_k']}, {radius}, {maxn}, {int(row['h_star'] == 1)})")
    if int(disc) != row["d_K"]:
        raise RuntimeError(f"case {row['case']}: disc {disc} != {row['d_K']}")
    return {
        "case": row["case"],
        "p_K": [int(pari.polcoef(pK, k)) for k in range(7)],
        "basis": [coeffs(b, 6) for b in zk],
        "sqrt_d_k": coeffs(sq, 6),
        "xi_candidates": [{"coords": [str(v) for v in xi], "primitive": bool(prim)} for xi, prim in xs],
    }


def main():
    src, dst = sys.argv[1], sys.argv[2]
    rows = json.load(open(src))["fields"]
    res = [field_row(r) for r in rows]
    with open(dst, "w") as f:
        f.write('{\n "comment": "Generated by tools/oracle/field_oracle.py (PARI/GP). basis rows are '
                'integral-basis elements as coefficients of 1, a, ..., a^5 for a root a of p_K; '
                'xi coords are over that integral basis.",\n "fields": [\n')
        f.write(",\n".join("  " + json.dumps(r) for r in res))
        f.write("\n ]\n}\n")


if __name__ == "__main__":
    main()
