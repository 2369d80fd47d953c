"""Smoke test for the extension module: run after `maturin develop` or
installing the wheel."""

import json

import hypertrop_py as ht

quartic = ht.Polygon([(0, 0), (4, 0), (0, 4)])
assert quartic.genus == 3 and quartic.is_maximal() and not quartic.is_hyperelliptic()
assert ht.Polygon.from_json(quartic.to_json()) == quartic

strip = ht.Polygon([(0, 0), (6, 0), (0, 2)])
tris = strip.triangulations(modulo_symmetry=True)
assert tris and all(t.is_regular() for t in tris)
t = tris[0]
assert len(t) == 2 * (len(strip.lattice_points()) - 1) - strip.boundary_count()
sk = t.skeleton()
assert sk.genus == 2 and sk.is_hyperelliptic()
heights = t.regular_height()
assert heights is not None and all("/" in h or h.lstrip("-").isdigit() for h in heights)
assert ht.Triangulation.from_json(t.to_json()).triangles == t.triangles

assert [len(ht.maximal_polygons(g)) for g in (2, 3)] == [4, 6]
assert [ht.chain_count(g) for g in (2, 3, 4, 5)] == [2, 3, 6, 10]
chains = ht.enumerate_chains(4)
assert len(chains) == 6 and all(c.is_hyperelliptic_chain() for _, c in chains)

theta = ht.MetricGraph(2, [(0, 1, "1"), (0, 1, "1/2"), (0, 1, "3")])
assert theta.genus == 2 and theta.is_hyperelliptic()
assert theta.crowdedness() == "not_crowded"
assert theta.render_embedding_svg().startswith("<?xml")
assert ht.MetricGraph.from_json(theta.to_json()) == theta

# unequal lengths on the middle pair break the involution
lopsided = ht.chain_from_roles(3, "00", ["1", "1"], [("1", "2")], ["1", "1"])
assert lopsided.chain_bits() == "00" and not lopsided.is_hyperelliptic()
balanced = ht.chain_from_roles(3, "00", ["1", "1"], [("2", "2")], ["1", "1"])
assert balanced.is_hyperelliptic() and balanced.render_chain_svg() is not None
assert len(ht.trivalent_graphs(3)) == 5

report = json.loads(ht.verify_theorem(strip, samples=1, seed=3, modulo_symmetry=True))
assert report["seed"] == 3

try:
    ht.Polygon([(0, 0), (1, 0), (2, 0)])
except ValueError:
    pass
else:
    raise AssertionError("collinear points must be rejected")

print("smoke test passed")
