"""
Routing building blocks: shortest paths, ranked alternatives, and the
candidate sets the optimizer actually searches over.
"""
from wayfinder import adaptive_candidates, load_layout, shortest_path, yen_k_shortest

# The city layout ships with the package: a 30-node street grid with one
# entrance (the bus stop), four points of interest, and six scenarios.
graph, scenarios = load_layout("layouts/city.json")
print(f"loaded {len(graph.nodes)} nodes, {len(graph.edges)} edges, {len(scenarios)} scenarios")

# Shortest path for a single trip.
walk = shortest_path(graph, "bus_stop", "school")
print(f"\nshortest bus_stop -> school: {walk.length:.0f} m")
print("  " + " -> ".join(walk.nodes))

# Ranked alternatives: the five shortest loopless routes for the same trip.
print("\nfive shortest alternatives:")
for i, p in enumerate(yen_k_shortest(graph, "bus_stop", "school", 5), start=1):
    print(f"  {i}. {p.length:.0f} m via {len(p.nodes)} nodes")

# The optimizer does not search all of those.  Per scenario it keeps only
# routes within 16% of the shortest; detours beyond that are never worth
# their length, so the search space stays small.
print("\ncandidate set sizes at 16% stretch:")
for z in scenarios:
    cands = adaptive_candidates(graph, z, stretch=0.16, k_cap=50)
    spread = ", ".join(f"{p.length:.0f}" for p in cands[:6])
    more = " ..." if len(cands) > 6 else ""
    print(f"  {z.source} -> {z.destination}: {len(cands)} candidates ({spread}{more} m)")
