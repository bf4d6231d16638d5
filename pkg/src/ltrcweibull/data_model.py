"""Observation and dataset types for LTRC competing-risks lifetime data.

Units are observed on their own clock (time 0 = entry into service). A unit
either fails from one of two causes (delta = 1 or 2) at time t < tau_R, or is
right-censored at t = tau_R (delta = 0). Units already in service when the
observation window opened are left-truncated (nu = 0): they are only in the
sample because they survived past tau_L.
"""

import csv
from dataclasses import dataclass
from functools import cached_property
from importlib import resources

import numpy as np

from .errors import ConsistencyError, ParseError

CENSORED = 0
CAUSE_1 = 1
CAUSE_2 = 2


@dataclass(frozen=True)
class Observation:
    """One unit: lifetime or censoring time plus truncation/cause indicators.

    tau_L is only meaningful for truncated units (nu = 0) and is conventionally
    0.0 otherwise.
    """

    t: float
    tau_L: float
    tau_R: float
    delta: int
    nu: int

    def __post_init__(self):
        if self.delta not in (0, 1, 2):
            raise ValueError(f"delta must be 0, 1 or 2, got {self.delta}")
        if self.nu not in (0, 1):
            raise ValueError(f"nu must be 0 or 1, got {self.nu}")
        if not self.t > 0:
            raise ValueError(f"t must be positive, got {self.t}")
        if not self.tau_R > 0:
            raise ValueError(f"tau_R must be positive, got {self.tau_R}")
        if self.delta == CENSORED:
            if self.t != self.tau_R:
                raise ValueError("censored units must have t equal to tau_R")
        elif not self.t < self.tau_R:
            raise ValueError("failed units must have t below tau_R")
        if self.nu == 0:
            if not 0 < self.tau_L < self.t:
                raise ValueError("truncated units need 0 < tau_L < t")
            if not self.tau_L < self.tau_R:
                raise ValueError("truncated units need tau_L < tau_R")


@dataclass(frozen=True)
class RawTransformerRecord:
    """One row of the calendar-year input format."""

    serial: int
    install_year: int
    exit_year: int
    nu: int
    delta: int

    def __post_init__(self):
        if self.delta not in (0, 1, 2):
            raise ValueError(f"delta must be 0, 1 or 2, got {self.delta}")
        if self.nu not in (0, 1):
            raise ValueError(f"nu must be 0 or 1, got {self.nu}")
        if self.exit_year <= self.install_year:
            raise ValueError(
                f"exit year {self.exit_year} must follow install year {self.install_year}"
            )


class Dataset:
    """Immutable collection of observations with cause/censoring index sets.

    Index sets are 0-based positions into `observations`: I0 censored,
    I1 cause-1 failures, I2 cause-2 failures. Construction validates every
    observation; `from_arrays` is the cheap path used by resampling loops.
    """

    def __init__(self, observations):
        obs = tuple(observations)
        t = np.array([o.t for o in obs], dtype=np.float64)
        tau_L = np.array([o.tau_L if o.nu == 0 else 0.0 for o in obs], dtype=np.float64)
        tau_R = np.array([o.tau_R for o in obs], dtype=np.float64)
        delta = np.array([o.delta for o in obs], dtype=np.int64)
        nu = np.array([o.nu for o in obs], dtype=np.int64)
        self._init_arrays(t, tau_L, tau_R, delta, nu)
        self.__dict__["observations"] = obs

    @classmethod
    def from_arrays(cls, t, tau_L, tau_R, delta, nu, validate=True):
        """Build a dataset directly from parallel arrays.

        tau_L entries for nu = 1 units are ignored (treated as 0).
        """
        self = cls.__new__(cls)
        t = np.ascontiguousarray(t, dtype=np.float64)
        tau_L = np.where(np.asarray(nu) == 0, tau_L, 0.0)
        tau_R = np.ascontiguousarray(tau_R, dtype=np.float64)
        delta = np.ascontiguousarray(delta, dtype=np.int64)
        nu = np.ascontiguousarray(nu, dtype=np.int64)
        if validate:
            trunc = nu == 0
            cens = delta == CENSORED
            ok = (
                np.all(t > 0)
                and np.all(tau_R > 0)
                and np.all(np.isin(delta, (0, 1, 2)))
                and np.all(np.isin(nu, (0, 1)))
                and np.all(t[cens] == tau_R[cens])
                and np.all(t[~cens] < tau_R[~cens])
                and np.all(tau_L[trunc] > 0)
                and np.all(tau_L[trunc] < t[trunc])
                and np.all(tau_L[trunc] < tau_R[trunc])
            )
            if not ok:
                raise ValueError("arrays violate observation invariants")
        self._init_arrays(t, tau_L, tau_R, delta, nu)
        return self

    def _init_arrays(self, t, tau_L, tau_R, delta, nu):
        for a in (t, tau_L, tau_R, delta, nu):
            a.flags.writeable = False
        self.__dict__["t_values"] = t
        self.__dict__["tau_L_values"] = tau_L
        self.__dict__["tau_R_values"] = tau_R
        self.__dict__["delta_values"] = delta
        self.__dict__["nu_values"] = nu
        self.__dict__["n"] = int(t.size)
        self.__dict__["m1"] = int(np.count_nonzero(delta == CAUSE_1))
        self.__dict__["m2"] = int(np.count_nonzero(delta == CAUSE_2))
        self.__dict__["m"] = self.m1 + self.m2
        logt = np.log(t)
        logt.flags.writeable = False
        logtau = np.log(tau_L[nu == 0]) if np.any(nu == 0) else np.empty(0)
        logtau = np.ascontiguousarray(logtau)
        logtau.flags.writeable = False
        self.__dict__["log_t"] = logt
        self.__dict__["log_tau_trunc"] = logtau
        self.__dict__["log_t_max"] = float(logt.max()) if logt.size else 0.0
        fail = delta != CENSORED
        self.__dict__["w1"] = float(logt[fail].sum())
        self.__dict__["w1_cause1"] = float(logt[delta == CAUSE_1].sum())
        self.__dict__["w1_cause2"] = float(logt[delta == CAUSE_2].sum())

    def __setattr__(self, name, value):
        raise AttributeError("Dataset is immutable")

    def __len__(self):
        return self.n

    def __repr__(self):
        return (
            f"Dataset(n={self.n}, m1={self.m1}, m2={self.m2}, "
            f"censored={self.n - self.m}, truncated={int(np.sum(self.nu_values == 0))})"
        )

    @cached_property
    def observations(self):
        return tuple(
            Observation(
                t=float(self.t_values[i]),
                tau_L=float(self.tau_L_values[i]),
                tau_R=float(self.tau_R_values[i]),
                delta=int(self.delta_values[i]),
                nu=int(self.nu_values[i]),
            )
            for i in range(self.n)
        )

    @cached_property
    def I0(self):
        return tuple(np.flatnonzero(self.delta_values == CENSORED).tolist())

    @cached_property
    def I1(self):
        return tuple(np.flatnonzero(self.delta_values == CAUSE_1).tolist())

    @cached_property
    def I2(self):
        return tuple(np.flatnonzero(self.delta_values == CAUSE_2).tolist())

    def scaled(self, factor):
        """Same data with every time divided by `factor` (> 0)."""
        if not factor > 0:
            raise ValueError("scale factor must be positive")
        return Dataset.from_arrays(
            self.t_values / factor,
            self.tau_L_values / factor,
            self.tau_R_values / factor,
            self.delta_values,
            self.nu_values,
            validate=False,
        )


def parse_transformer_csv(path):
    """Read calendar-year records from a CSV file.

    Columns: sn, install_year, exit_year, nu, delta. A single header row is
    tolerated. Raises ParseError naming the offending row.
    """
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not f.strip() for f in row):
                continue
            first = row[0].strip()
            if lineno == 1 and not _is_int(first):
                continue  # header
            if len(row) != 5:
                raise ParseError(f"row {lineno}: expected 5 fields, got {len(row)}")
            try:
                values = [int(f.strip()) for f in row]
            except ValueError as exc:
                raise ParseError(f"row {lineno}: non-integer field ({exc})") from None
            try:
                records.append(RawTransformerRecord(*values))
            except ValueError as exc:
                raise ParseError(f"row {lineno}: {exc}") from None
    return records


def _is_int(text):
    try:
        int(text)
    except ValueError:
        return False
    return True


def to_dataset(records, truncation_year=1980, censor_year=2008, scale=100.0):
    """Convert calendar-year records to unit-clock observations.

    Each unit's clock starts at its installation; times are divided by
    `scale`. Truncated units (nu = 0) carry tau_L = (truncation_year -
    install_year) / scale.
    """
    if not scale > 0:
        raise ValueError("scale must be positive")
    obs = []
    for rec in records:
        if rec.exit_year > censor_year:
            raise ConsistencyError(
                f"serial {rec.serial}: exit year {rec.exit_year} is past the "
                f"censoring year {censor_year}"
            )
        if rec.nu == 0 and rec.install_year >= truncation_year:
            raise ConsistencyError(
                f"serial {rec.serial}: marked truncated but installed in "
                f"{rec.install_year}, not before {truncation_year}"
            )
        if rec.nu == 1 and rec.install_year < truncation_year:
            raise ConsistencyError(
                f"serial {rec.serial}: marked non-truncated but installed in "
                f"{rec.install_year}, before {truncation_year}"
            )
        tau_L = (truncation_year - rec.install_year) / scale if rec.nu == 0 else 0.0
        try:
            obs.append(
                Observation(
                    t=(rec.exit_year - rec.install_year) / scale,
                    tau_L=tau_L,
                    tau_R=(censor_year - rec.install_year) / scale,
                    delta=rec.delta,
                    nu=rec.nu,
                )
            )
        except ValueError as exc:
            raise ConsistencyError(f"serial {rec.serial}: {exc}") from None
    return Dataset(obs)


def bundled_transformer_path():
    """Filesystem path of the packaged transformer dataset."""
    return str(resources.files("ltrcweibull.data").joinpath("transformers.csv"))


def load_transformer_dataset(truncation_year=1980, censor_year=2008, scale=100.0):
    """The packaged transformer dataset, ready for fitting."""
    records = parse_transformer_csv(bundled_transformer_path())
    return to_dataset(records, truncation_year, censor_year, scale)
