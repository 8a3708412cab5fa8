"""End-to-end computation of HF+ for a Brieskorn sphere, with cross-checks.

The relative module comes from the graded root of the semigroup delta
sequence; the absolute grading comes from the plumbing lattice search. Two
independent consistency checks guard the result: the tree-peeling and
elder-rule homology routes must agree, and the lattice d-invariant must
equal (K_can^2 + s)/4 - 2 min(tau), which uses the canonical class and the
tau function instead of any search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from hfsurgery.brieskorn import BrieskornParams, delta_sequence, n_value, semigroup_window
from hfsurgery.delta import DeltaSequence, reduce, tau
from hfsurgery.errors import InternalInconsistencyError, ParityMismatchError
from hfsurgery.graded_root import (
    FUModule,
    GradedRoot,
    build_root,
    homology,
    root_to_dot,
    shift_to_absolute,
    tau_homology,
)
from hfsurgery.obstruction import combined_verdict, not_surgery_in_s3
from hfsurgery.plumbing import PlumbingGraph, canonical_square, d_invariant, plumbing_graph


@dataclass
class PipelineResult:
    params: BrieskornParams
    expanded: DeltaSequence
    reduced: DeltaSequence
    relative: FUModule
    graph: PlumbingGraph
    d_minus: int
    module: FUModule
    verdict: dict
    checks: dict = field(default_factory=dict)

    @property
    def d(self) -> int:
        return self.module.d

    @cached_property
    def root(self) -> GradedRoot:
        return build_root(tau(self.reduced))

    @property
    def grading_shift(self) -> int:
        """Absolute grading of a root vertex is 2*chi + shift."""
        return self.module.tower_bottom - self.relative.tower_bottom

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "N": n_value(self.params),
            "window": semigroup_window(self.params).to_json(),
            "expanded": self.expanded.to_json(),
            "reduced": self.reduced.to_json(),
            "relative_module": self.relative.to_json(),
            "module": self.module.to_json(),
            "plumbing": {**self.graph.to_json(), "d": self.d_minus},
            "d": self.d,
            "d_mirror": self.d_minus,
            "verdict": self.verdict,
            "checks": dict(self.checks),
        }

    def pretty(self, max_items: int = 40) -> str:
        def show(seq):
            vals = list(seq)
            if len(vals) > max_items:
                return "{" + ", ".join(map(str, vals[:max_items])) + f", ... ({len(vals)} total)}}"
            return "{" + ", ".join(map(str, vals)) + "}"

        def show_values(vals):
            vals = list(vals)
            tail = f", ... ({len(vals)} total)" if len(vals) > max_items else ""
            return "<" + ", ".join(f"{v:+d}" for v in vals[:max_items]) + tail + ">"

        v = self.verdict
        lines = [
            f"{self.params}   N = {n_value(self.params)}",
            f"X        = {show(self.expanded.positions)}",
            f"Delta    = {show_values(self.expanded.values)}",
            f"reduced  = {show_values(self.reduced.values)} at {show(self.reduced.positions)}",
            f"plumbing : {len(self.graph)} vertices, d(-Y) = {self.d_minus}",
            f"d(Y)     = {self.d}",
            f"HF+(Y)   = {self.module.pretty()}",
            f"verdict  : {v['status']}",
            f"  Y : {not_surgery_in_s3(self.module).justification()}",
            f"  -Y: d = {self.d_minus}; reduced homology of -Y is not computed, so no obstruction is claimed.",
        ]
        return "\n".join(lines) + "\n"

    def dot(self) -> str:
        return root_to_dot(self.root, self.grading_shift, name="graded_root")


def run_brieskorn(params: BrieskornParams, method: str = "tree") -> PipelineResult:
    expanded = delta_sequence(params)
    reduced = reduce(expanded).sequence
    t = tau(reduced)
    relative = tau_homology(t)
    checks = {}

    peeled = homology(build_root(t))
    checks["homology_routes_agree"] = peeled == relative
    if not checks["homology_routes_agree"]:
        raise InternalInconsistencyError(f"{params}: tree peeling gives {peeled}, elder rule gives {relative}")

    graph = plumbing_graph(params)
    d_minus = d_invariant(graph, method)
    kc = canonical_square(graph)
    alt = (kc + len(graph)) // 4 - 2 * t.minimum
    checks["canonical_class_d"] = alt == d_minus
    if alt != d_minus:
        raise InternalInconsistencyError(
            f"{params}: lattice search gives d(-Y) = {d_minus}, canonical class formula gives {alt}")

    try:
        module = shift_to_absolute(relative, -d_minus)
    except ParityMismatchError as exc:
        raise InternalInconsistencyError(f"{params}: {exc}") from exc
    checks["tower_matches_plumbing"] = module.tower_bottom == -d_minus
    verdict = combined_verdict(module, d_minus)
    return PipelineResult(params, expanded, reduced, relative, graph, d_minus, module, verdict, checks)
