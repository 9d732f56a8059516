"""
Accessibility heatmaps and blind-zone repair: measure how reliably walkers
dropped anywhere on the map reach a destination, then patch the dead spots
with connector signs.
"""
from wayfinder import (
    ProjectConfig,
    blind_samples,
    compute_field,
    evaluate_placement,
    fix_blind_zone,
    load_layout,
    optimize_scheme,
    refine_signs,
    subdivide_edges,
)

graph, scenarios = load_layout("layouts/city.json")
config = ProjectConfig(seed=0)
scheme, _ = optimize_scheme(
    graph, scenarios, config.scheme_weights, config.scheme_schedule(), config.stretch, config.k_cap
)
graph_sub = subdivide_edges(graph, config.sign_spacing)
placement, _ = refine_signs(
    graph_sub, scheme, None, config.sign_weights, config.agent, config.sign_schedule()
)

# Sample the whole network every 25 m: from each sample node, launch agents
# toward the school and record how many make it.  Routes carry signs, so
# they score high; side streets off the scheme can be blind.
field = compute_field(graph_sub, placement, "school", config.heatmap_interval, config.agent, seed="demo")
rates = sorted(s.rate for s in field.samples)
print(f"field toward school: {len(field.samples)} samples, rates {rates[0]:.2f} .. {rates[-1]:.2f}")

blind = blind_samples(field)
print(f"\n{len(blind)} blind samples (success below 50%):")
for s in sorted(blind, key=lambda s: s.rate)[:8]:
    print(f"  {s.node} at ({s.x:.0f}, {s.y:.0f}): {s.rate:.0%}")

# Repair the worst corner: the boat house, a dead end far off every route.
# The fix walks from the click toward the nearest signed route node and
# drops a connector arrow at each decision point on the way.
fixed = fix_blind_zone(graph_sub, scheme, placement, 600.0, 480.0, "school")
added = sorted(set(fixed.entries) - set(placement.entries), key=lambda s: s.node)
print(f"\nconnector signs added at ({600}, {480}):")
for s in added:
    print(f"  {s.node}: school via {s.next_node}")

after = compute_field(graph_sub, fixed, "school", config.heatmap_interval, config.agent, seed="demo")
by_node = {s.node: s.rate for s in after.samples}
before_by_node = {s.node: s.rate for s in field.samples}
print("\nrepaired corner, before -> after:")
for node in ("boat_house", "alley", "east_wall", "dock"):
    print(f"  {node}: {before_by_node[node]:.0%} -> {by_node[node]:.0%}")
print(f"blind samples remaining toward school: {len(blind_samples(after))}")

rate = evaluate_placement(graph_sub, fixed, scheme, None, config.agent, seed="demo").failure_rate
print(f"scenario failure rate with connectors in place: {rate:.1%}")
