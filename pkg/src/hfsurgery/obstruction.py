"""Verdicts on whether a homology sphere can arise by surgery on a knot.

The engine never claims that a manifold *is* surgery on a knot: a verdict is
either "obstructed" (a theorem's hypotheses hold and its conclusion fails on
the input) or "inconclusive".
"""

from __future__ import annotations

from dataclasses import dataclass, field

from hfsurgery.errors import RelativeGradingError
from hfsurgery.graded_root import FUModule, u_kills_red_at

OBSTRUCTED = "obstructed"
INCONCLUSIVE = "inconclusive"

S3_RULE = "knot-surgery-in-S3"
LSPACE_RULE = "knot-surgery-in-L-space-sphere"


@dataclass(frozen=True)
class Verdict:
    status: str
    rule: str
    evidence: dict = field(default_factory=dict, compare=False)

    @property
    def obstructed(self) -> bool:
        return self.status == OBSTRUCTED

    def to_json(self) -> dict:
        return {"status": self.status, "rule": self.rule, "evidence": dict(self.evidence)}

    @classmethod
    def from_json(cls, data: dict) -> "Verdict":
        return cls(data["status"], data["rule"], dict(data.get("evidence", {})))

    def justification(self) -> str:
        e = self.evidence
        if self.rule == S3_RULE:
            head = (f"d = {e['d']}; U acts {'trivially' if e['u_kills_red_at_0'] else 'nontrivially'} "
                    f"on HF_red in grading 0.")
            if self.obstructed:
                return (head + " Surgery on a knot in S^3 with d <= -8 forces U to act nontrivially on "
                        "HF_red in grading 0, so this manifold is not surgery on a knot in S^3.")
            return head + " The hypotheses of the S^3 surgery obstruction are not met."
        if self.rule == LSPACE_RULE:
            head = (f"d(Y) = {e['d_Y']}, d(Y') = {e['d_Yprime']}; U acts "
                    f"{'trivially' if e['u_kills_red_at_dY'] else 'nontrivially'} on HF_red(Y') "
                    f"in grading d(Y).")
            if self.obstructed:
                return (head + " Surgery on a knot in an L-space sphere Y with d(Y') <= d(Y) - 8 forces U to "
                        "act nontrivially there, so Y' is not surgery on a knot in Y.")
            return head + " The hypotheses of the L-space surgery obstruction are not met."
        return f"{self.status} ({self.rule})"


def _require_absolute(m: FUModule) -> None:
    if not m.absolute:
        raise RelativeGradingError("verdicts need an absolutely graded module")


def not_surgery_in_s3(m: FUModule) -> Verdict:
    _require_absolute(m)
    kills = u_kills_red_at(m, 0)
    hit = m.d <= -8 and kills
    return Verdict(OBSTRUCTED if hit else INCONCLUSIVE, S3_RULE, {"d": m.d, "u_kills_red_at_0": kills})


def not_surgery_in_lspace(m_y: FUModule, m_yprime: FUModule) -> Verdict:
    """Y' versus surgery on a knot in Y, where Y has no reduced homology."""
    _require_absolute(m_y)
    _require_absolute(m_yprime)
    if not m_y.is_pure_tower():
        raise ValueError("the ambient sphere must be an L-space (pure tower)")
    kills = u_kills_red_at(m_yprime, m_y.d)
    hit = m_yprime.d <= m_y.d - 8 and kills
    return Verdict(
        OBSTRUCTED if hit else INCONCLUSIVE,
        LSPACE_RULE,
        {"d_Y": m_y.d, "d_Yprime": m_yprime.d, "u_kills_red_at_dY": kills},
    )


def mirror_verdict(d_mirror: int) -> Verdict:
    """Verdict for -Y when only its d-invariant is known.

    Without HF_red(-Y) the S^3 rule cannot fire, so the result is always
    inconclusive; the d value is kept as evidence.
    """
    return Verdict(INCONCLUSIVE, S3_RULE, {"d": d_mirror, "u_kills_red_at_0": None,
                                           "note": "reduced homology of the mirror is not computed"})


def combined_verdict(m: FUModule, d_mirror: int) -> dict:
    """Evaluate Y and -Y; the manifold is obstructed (in either orientation) if one verdict is."""
    own = not_surgery_in_s3(m)
    other = mirror_verdict(d_mirror)
    status = OBSTRUCTED if own.obstructed or other.obstructed else INCONCLUSIVE
    return {"status": status, "Y": own.to_json(), "-Y": other.to_json()}


def reduced_extent(m: FUModule) -> int:
    """|max grading with nonzero reduced homology|, and 0 when there is none."""
    gs = m.red_gradings()
    return abs(gs[-1]) if gs else 0


def poincare_sum_threshold(d_plus: int, d_minus: int, n_plus: int, n_minus: int) -> int:
    """Least k >= 1 with 2k >= max(d+, d-) + max(n+, n-) + 8.

    Connected sums of k Poincare spheres (d = 2 each) then satisfy the gap
    needed by the L-space obstruction in both orientations.
    """
    need = max(d_plus, d_minus) + max(n_plus, n_minus) + 8
    return max(1, -(-need // 2))
