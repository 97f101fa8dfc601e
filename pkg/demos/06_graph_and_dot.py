"""
The graph file: load, project, export
=====================================

The bundled fixture is a small Brexit debate between two speakers.
"""
import json

from tafkit import fixture_path, graph

g = graph.load(fixture_path())
print(len(g.illocutions), "illocutions,", len(g.support_nodes), "supports,",
      len(g.attack_nodes), "attacks,", len(g.commitments), "commitments")

taf = graph.project(g, graph.ProjectionConfig(grid=10))
print("B on brexit:", taf.belief("B", "brexit").to_json())
print(json.dumps(graph.taf_to_json(taf)["applications"][2], indent=1))

# pipe into `dot -Tsvg` to draw it
print(graph.export_dot(g)[:400], "...")
