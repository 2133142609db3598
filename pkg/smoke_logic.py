import time

t0 = time.time()

from liegeo.fields import GF
from liegeo.carriers import (MetabelianWindow, TableWindow,
                             nilpotent_pair_algebra, abelian_algebra)
from liegeo.terms import Bracket, Sum, Var, parse_system
from liegeo import geometry, logic

mark = t0


def lap(label):
    global mark
    now = time.time()
    print("%-46s %.3fs" % (label, now - mark))
    mark = now


# --- axiom suite on free metabelian windows -------------------------------
for p in (2, 3):
    win = MetabelianWindow(2, GF(p), 3, exact=True)
    ring = win.algebra.ring
    polys = [ring.var(0), ring.var(0) + ring.var(1)]
    suite = logic.phi_suite(win, polys=polys)
    for v in suite.verdicts:
        print("  GF(%d) %-12s holds=%s method=%s provisos=%s"
              % (p, v.axiom, v.holds, v.method, v.provisos))
    assert suite.all_hold(), suite
    methods = {v.axiom: v.method for v in suite.verdicts}
    assert methods["Phi1"] == "multilinear-basis"
    assert methods["Phi4"] == "linear-rank"
    assert all(m == "action-kernel" for a, m in methods.items()
               if a.startswith("Phi5")), methods
    lap("phi suite metabelian GF(%d) d=3" % p)

# --- failures on the non-example -------------------------------------------
alg1 = nilpotent_pair_algebra(GF(2), 1)
win1 = TableWindow(alg1)
res = logic.check_sentence(logic.phi2_sentence(), win1)
print("  phi2 on nilpotent1:", res.holds, res.witness_rendered(win1))
assert not res.holds
w = res.witness_rendered(win1)
assert w == {"x": "a1", "y": "b1"}, w
lap("phi2 fails on nilpotent pair n=1")

alg2 = nilpotent_pair_algebra(GF(2), 2)
win2 = TableWindow(alg2)
basis = {b.render(win2.names): b for b in win2.basis()}
qi = logic.annihilator_quasi_identity([("a1", basis["a1"]),
                                       ("b1", basis["b1"])])
print("  qi:", qi.render(GF(2)))
res = logic.check_sentence(qi, win2)
print("  annihilator qi on nilpotent2:", res.holds,
      res.witness_rendered(win2))
assert not res.holds
w = res.witness_rendered(win2)
assert w == {"x": "a2", "y": "b2"}, w
lap("annihilator qi fails on nilpotent pair n=2")

# the same qi holds on the n=1 algebra (only a1, b1 to annihilate)
basis1 = {b.render(win1.names): b for b in win1.basis()}
qi1 = logic.annihilator_quasi_identity([("a1", basis1["a1"]),
                                        ("b1", basis1["b1"])])
res = logic.check_sentence(qi1, win1)
assert res.holds, res.witness_rendered(win1)
lap("annihilator qi holds on n=1")

# --- phi4 fit-degenerate proviso on an abelian table -----------------------
ab3 = TableWindow(abelian_algebra(GF(2), 3))
v4 = logic._check_phi4(ab3, 2, 200000)
print("  phi4 abelian:", v4.holds, v4.method, v4.provisos)
assert v4.holds and "fit_degenerate" in v4.provisos
suite = logic.phi_suite(ab3, r=2)
assert suite.all_hold()
lap("phi suite abelian table r=2")

# phi2 fails on nilpotent2 as well, witness is the minimal graded pair
res2 = logic.check_sentence(logic.phi2_sentence(), win2)
assert not res2.holds
print("  phi2 witness on nilpotent2:", res2.witness_rendered(win2))
lap("phi2 on nilpotent2")

# --- quasi-identity enumeration on an abelian carrier ----------------------
ab2 = TableWindow(abelian_algebra(GF(2), 2))
qis = logic.enumerate_quasi_identities(ab2, arity=2, max_premises=2)
rendered = [q.render(GF(2)) for q in qis]
print("  %d quasi-identities, first few:" % len(qis))
for r in rendered[:4]:
    print("    " + r)
assert "0 = 0 -> [z1, z2] = 0" in rendered
assert "z1 = 0 & z2 = 0 -> z1 + z2 = 0" in rendered
lap("enumerate_quasi_identities abelian dim=2")

# --- saturation vs kernel radical on abelian carriers ----------------------
texts = [
    "algebra zero field=GF(2)\nvars x, y\neq x = 0\n",
    "algebra zero field=GF(2)\nvars x, y\neq [x, y] = 0\n",
    "algebra zero field=GF(2)\nvars x, y\neq x + [x, y] = 0\n",
]
for text in texts:
    system = parse_system(text)
    aset = geometry.solve(system, ab2)
    rad = geometry.radical(aset, degree=2)
    sat = logic.saturate_radical(system, qis, degree=2)
    same = rad.key == sat.key
    print("  %-22r rad=%d sat=%d rounds=%d same=%s"
          % (text.splitlines()[2], rad.dim(), sat.dim(), sat.rounds, same))
    assert same, (rad.terms_rendered() if hasattr(rad, "terms_rendered")
                  else rad.rows, sat.rows)
lap("saturation matches kernel radical x3")

# --- discrimination ---------------------------------------------------------
system = parse_system("algebra zero field=GF(2)\nvars x, y\neq [x, y] = 0\n")
aset = geometry.solve(system, ab2)
cp = geometry.functor_F(aset, degree=2)
hom = logic.discriminates(cp, ab2, [Var("x"), Var("y")])
print("  discriminating hom:", None if hom is None else
      {k: ab2.render_element(v) for k, v in hom.items()})
assert hom is not None
bad = logic.discriminates(cp, ab2, [Bracket(Var("x"), Var("y"))])
assert bad is None
lap("discriminates")

# --- geometric equivalence probe -------------------------------------------
corpus = [parse_system(t) for t in texts]
ok, div = logic.geo_equiv_probe(ab2, ab2, corpus, degree=2)
assert ok and div is None
ab3w = TableWindow(abelian_algebra(GF(2), 3))
ok2, div2 = logic.geo_equiv_probe(ab2, ab3w, corpus, degree=2)
print("  equiv(ab2, ab2)=%s  equiv(ab2, ab3)=%s div=%s" % (ok, ok2, div2))
lap("geo_equiv_probe")

print("total %.3fs" % (time.time() - t0))
