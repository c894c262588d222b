"""Independent checker for conjugate-word certificates.

Only matrix arithmetic is shared with the generator: the checker reads the
explicit matrices of ``S``, the conjugators and the target, multiplies
everything out and compares bit-exactly.  Failures are reported, never
raised.
"""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class VerificationReport:
    ok: bool
    letter_count: int
    claimed_bound: int
    malformed: list[tuple[int, str]] = field(default_factory=list)  # (letter index, reason)
    first_mismatch: int | None = None  # first letter index of the block where the product diverges
    message: str = ""

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "letter_count": self.letter_count,
            "claimed_bound": self.claimed_bound,
            "malformed": [{"letter": i, "reason": r} for i, r in self.malformed],
            "first_mismatch": self.first_mismatch,
            "message": self.message,
        }


def _shape_ok(M, like) -> bool:
    return type(M) is type(like) and M.shape_key() == like.shape_key()


def _inverse_or_none(M):
    try:
        return M.inverse()
    except (ArithmeticError, ValueError, ZeroDivisionError):
        return None


def verify_certificate(cert) -> VerificationReport:
    """Check that the letters multiply to the target and every letter is well formed."""
    S = cert.generating_set
    mats = list(S.matrices)
    target = cert.target
    letters = list(cert.letters)
    report = VerificationReport(False, len(letters), cert.claimed_norm_bound)
    inverses = {}  # conjugator key -> inverse, computed once per distinct conjugator

    for k, g in enumerate(mats):
        if not _shape_ok(g, target):
            report.malformed.append((-1, f"generator {k} has the wrong shape or ring"))
    for pos, letter in enumerate(letters):
        if not isinstance(letter.gen_index, int) or not 0 <= letter.gen_index < len(mats):
            report.malformed.append((pos, f"generator index {letter.gen_index} outside S (size {len(mats)})"))
        if letter.sign not in (1, -1):
            report.malformed.append((pos, f"sign {letter.sign} is not +1 or -1"))
        if not _shape_ok(letter.conjugator, target):
            report.malformed.append((pos, "conjugator has the wrong shape or ring"))
        else:
            key = letter.conjugator.key()
            if key not in inverses:
                inverses[key] = _inverse_or_none(letter.conjugator)
            if inverses[key] is None:
                report.malformed.append((pos, "conjugator is not invertible"))
    if cert.claimed_norm_bound != len(letters):
        report.malformed.append((-1, f"claimed bound {cert.claimed_norm_bound} differs from letter count {len(letters)}"))
    if report.malformed:
        report.first_mismatch = min((p for p, _ in report.malformed if p >= 0), default=None)
        report.message = "malformed certificate: " + "; ".join(f"letter {p}: {r}" if p >= 0 else r for p, r in report.malformed)
        return report

    checkpoints = sorted(cert.checkpoints, key=lambda c: c[0])
    running = target.identity()
    block_start = 0
    cp = 0
    for pos, letter in enumerate(letters):
        s = mats[letter.gen_index]
        if letter.sign < 0:
            s = s.inverse()
        c = letter.conjugator
        running = running * (c * s * inverses[c.key()])
        while cp < len(checkpoints) and checkpoints[cp][0] == pos + 1:
            if running != checkpoints[cp][1]:
                report.first_mismatch = block_start
                report.message = f"running product leaves the recorded checkpoint in letters {block_start}..{pos}"
                return report
            cp += 1
            block_start = pos + 1
    if running != target:
        report.first_mismatch = block_start
        report.message = f"product differs from the target; first unchecked letter is {block_start}"
        return report
    report.ok = True
    report.message = f"verified: {len(letters)} letters multiply to the target"
    return report
