"""Pass/fail reports with exact counterexample witnesses."""

from __future__ import annotations


class CheckResult:
    """Outcome of one named check; a failing check always carries a witness."""

    __slots__ = ("check", "status", "witness")

    def __init__(self, check, ok, witness=None):
        self.check = check
        self.status = "pass" if ok else "fail"
        self.witness = witness
        if not ok and witness is None:
            raise ValueError(f"failing check {check!r} requires a witness")

    @property
    def ok(self):
        return self.status == "pass"

    def to_dict(self):
        doc = {"check": self.check, "status": self.status}
        if self.witness is not None:
            doc["witness"] = self.witness
        return doc

    def __repr__(self):
        return f"CheckResult({self.check!r}, {self.status})"


class VerificationReport:
    """An ordered list of check results plus free-form notes."""

    __slots__ = ("checks", "notes")

    def __init__(self, checks=(), notes=()):
        self.checks = list(checks)
        self.notes = list(notes)

    def add(self, check, ok, witness=None):
        self.checks.append(CheckResult(check, ok, witness))

    def note(self, text):
        self.notes.append(text)

    def extend(self, other, prefix=""):
        for c in other.checks:
            self.checks.append(CheckResult(prefix + c.check, c.ok, c.witness))
        self.notes.extend(other.notes)

    @property
    def passed(self):
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]

    def first_failure(self):
        for c in self.checks:
            if not c.ok:
                return c
        return None

    def __getitem__(self, check):
        for c in self.checks:
            if c.check == check:
                return c
        raise KeyError(check)

    def to_dict(self):
        doc = {
            "status": "pass" if self.passed else "fail",
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.notes:
            doc["notes"] = list(self.notes)
        return doc

    def __repr__(self):
        state = "pass" if self.passed else "fail"
        return f"VerificationReport({state}, {len(self.checks)} checks)"
