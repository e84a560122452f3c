"""Check records, structure reports, and canonical (bit-stable) serialization.

Reports diff cleanly: keys are emitted sorted, every float is formatted
with ``%.12e``, and nothing time- or machine-dependent is written.
"""

import hashlib
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "CheckRecord",
    "StructureReport",
    "canonical_json",
    "config_hash",
    "DEFAULT_TOLERANCES",
]

# Default per-check tolerances; overridable via the [tolerances] config
# section or the tol_profile argument of the verification routines.
DEFAULT_TOLERANCES = {
    "ladder_b_phi": 1e-8,
    "ladder_a_phi": 1e-8,
    "ladder_adag_psi": 1e-8,
    "ladder_bdag_psi": 1e-8,
    "biorthogonality": 1e-9,
    "number_phi": 1e-8,
    "number_psi": 1e-8,
    "commutator": 1e-8,
    "theta_conjugation": 1e-9,
    "theta_positivity": 1e-12,
    "similarity_lower": 1e-11,
    "similarity_raise": 1e-11,
    "vacuum_pairing": 1e-10,
    "eq_a2_consistency": 1e-9,
    "weyl_x_factorization": 1e-7,
    "weyl_p_factorization": 1e-7,
    "adjoint_pairing": 1e-8,
    "sigma2_series": 1e-8,
    "commuting_translations": 1e-8,
    "route_consistency": 1e-8,
    "eigen_r1": 1e-7,
    "eigen_r2": 1e-7,
    "eigen_r3": 1e-7,
    "resolution_identity": 1e-5,
    "zak_roundtrip": 1e-10,
    "zak_parseval": 1e-9,
    "zak_quasiperiod_q": 1e-10,
    "zak_period_k": 1e-10,
    "t1_modulation": 1e-5,
    "t2_shift": 1e-5,
    "updown_pairing": 1e-8,
    "kq_family_parseval": 1e-7,
    "kq_t1_eigen": 1e-6,
    "kq_t2_eigen": 1e-6,
    "s_eta_consistency": 1e-9,
    "momentum_eigen": 1e-6,
    "momentum_parseval": 1e-7,
    "lattice_factorization": 1e-6,
    "exponential_rank": 0.5,
    "lattice_complete_residual": 1e-2,
    "lattice_incomplete_margin": 1e-12,
    "lattice_window_monotone": 1e-9,
}


@dataclass
class CheckRecord:
    """One named deviation measured against a tolerance."""

    name: str
    deviation: float
    tolerance: float
    passed: bool

    def as_dict(self):
        return {
            "name": self.name,
            "deviation": float(self.deviation),
            "tolerance": float(self.tolerance),
            "pass": bool(self.passed),
        }


@dataclass
class StructureReport:
    """Map check-name -> maximum deviation, with pass/fail verdicts."""

    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def add(self, name, deviation, tolerance):
        deviation = float(deviation)
        if not np.isfinite(deviation) or deviation < 0:
            raise ValueError(f"check {name!r}: deviation must be finite >= 0, got {deviation}")
        self.checks[name] = CheckRecord(name, deviation, float(tolerance), deviation <= tolerance)
        return self.checks[name]

    def note(self, text):
        self.notes.append(str(text))

    def merge(self, other, prefix=""):
        for name, rec in other.checks.items():
            self.checks[prefix + name] = CheckRecord(
                prefix + name, rec.deviation, rec.tolerance, rec.passed
            )
        self.notes.extend(other.notes)

    @property
    def all_pass(self):
        return all(rec.passed for rec in self.checks.values())

    def deviation(self, name):
        return self.checks[name].deviation

    def as_records(self):
        return [self.checks[k].as_dict() for k in sorted(self.checks)]


def _canon(obj, out):
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append("%.12e" % float(obj))
    elif isinstance(obj, str):
        out.append(
            '"' + obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'
        )
    elif isinstance(obj, (complex, np.complexfloating)):
        _canon({"re": float(obj.real), "im": float(obj.imag)}, out)
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if i:
                out.append(",")
            _canon(str(key), out)
            out.append(":")
            _canon(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, item in enumerate(list(obj)):
            if i:
                out.append(",")
            _canon(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot canonicalize {type(obj)!r}")


def canonical_json(obj):
    """Serialize to canonical JSON: sorted keys, %.12e floats, no whitespace."""
    out = []
    _canon(obj, out)
    return "".join(out)


def config_hash(obj):
    """Content hash (sha256 of the canonical JSON) of a config echo."""
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()
