"""
Sign placement: start from a sign at every node along every route, then let
the annealer strip the redundant ones while simulated pedestrians keep
reaching their destinations.
"""
from wayfinder import (
    ProjectConfig,
    evaluate_placement,
    full_placement,
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

# Signs may sit mid-block, not just at intersections, so the graph gets
# extra placement nodes every 50 m before anything is placed.
graph_sub = subdivide_edges(graph, config.sign_spacing)
print(f"placement graph: {len(graph.nodes)} street nodes -> {len(graph_sub.nodes)} candidate sites")

# The saturated starting point: no walker can ever get lost, but most of
# the boards repeat what the previous one already said.
saturated = full_placement(graph_sub, scheme)
base = evaluate_placement(graph_sub, saturated, scheme, None, config.agent, seed="demo")
print(f"\nsaturated placement: {len(saturated)} sign entries, failure rate {base.failure_rate:.1%}")

placement, trace = refine_signs(
    graph_sub, scheme, None, config.sign_weights, config.agent, config.sign_schedule()
)
out = evaluate_placement(graph_sub, placement, scheme, None, config.agent, seed="demo")
print(f"refined placement:   {len(placement)} sign entries after {trace[-1].iteration} iterations")
print(f"failure rate {out.failure_rate:.1%} (tolerance {config.sign_weights.tolerance:.0%})")

print("\nper-scenario success with the refined signs:")
for s in out.stats:
    print(f"  {s.scenario.source} -> {s.scenario.destination}: {s.successes}/{s.agents} agents")

# Entries that share a node form one physical board with several arrows.
boards = placement.boards()
multi = {node: signs for node, signs in boards.items() if len(signs) > 1}
print(f"\n{len(placement)} entries collapse onto {len(boards)} boards; {len(multi)} boards carry multiple arrows:")
for node, signs in sorted(multi.items()):
    arrows = ", ".join(f"{s.destination} via {s.next_node}" for s in signs)
    print(f"  {node}: {arrows}")
