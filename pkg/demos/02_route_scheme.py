"""
Route scheme optimization: pick one path per scenario so the whole set is
cheap to follow, not just each trip in isolation.
"""
from wayfinder import ProjectConfig, WayfindingScheme, load_layout, optimize_scheme, total_scheme_cost
from wayfinder.pathing import adaptive_candidates
from wayfinder.scheme import (
    cost_global_length,
    cost_global_node,
    cost_local_angle,
    cost_local_length,
    cost_local_node,
)

graph, scenarios = load_layout("layouts/city.json")
config = ProjectConfig(seed=0)

# The obvious baseline: give every scenario its shortest path.  Short for
# each walker, but the routes scatter across the map, so a lot of street
# has to carry signage.
candidates = tuple(
    tuple(adaptive_candidates(graph, z, config.stretch, config.k_cap)) for z in scenarios
)
all_shortest = WayfindingScheme(tuple(scenarios), candidates, tuple(0 for _ in scenarios))
print(f"all-shortest baseline cost: {total_scheme_cost(graph, all_shortest):.6f}")

# The annealer trades a little per-trip length for overlap: routes that
# share streets share signs.
scheme, trace = optimize_scheme(
    graph, scenarios, config.scheme_weights, config.scheme_schedule(), config.stretch, config.k_cap
)
print(f"optimized cost:             {total_scheme_cost(graph, scheme):.6f} after {trace[-1].iteration} iterations")

print("\ncost terms (weighted blend of five pressures):")
for name, fn in [
    ("per-trip length", cost_local_length),
    ("per-trip decision points", cost_local_node),
    ("per-trip turning", cost_local_angle),
    ("network street coverage", cost_global_length),
    ("network node coverage", cost_global_node),
]:
    print(f"  {name:<26} {fn(graph, scheme):.6f}")

print("\nchosen routes:")
for i, (z, path) in enumerate(zip(scheme.scenarios, scheme.paths)):
    detour = path.length / min(c.length for c in candidates[i]) - 1.0
    print(f"  {z.source} -> {z.destination}: {path.length:.0f} m (+{detour:.0%} over shortest)")
    print("    " + " -> ".join(path.nodes))
