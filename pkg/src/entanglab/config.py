"""Experiment configuration: JSON schema, validation, canonical digest."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

__all__ = ["ConfigError", "ExperimentConfig", "EXPERIMENTS"]

EXPERIMENTS = ("threshold-scan", "spectral", "concentration", "gue-approx", "monotonicity")

_COMMON_KEYS = {"experiment", "trials", "master_seed", "output", "tolerances"}
_KEYS_BY_EXPERIMENT = {
    "threshold-scan": {"dims", "s_values", "criterion"},
    "spectral": {"ensemble", "n", "s"},
    "concentration": {"d", "s", "body"},
    "gue-approx": {"n", "s", "body"},
    "monotonicity": {"mode", "d", "d1", "d2", "s"},
}
_TOLERANCE_KEYS = {"gauge_tol"}

EXACT_SCAN_DIMS = {(2, 2), (2, 3), (3, 2)}


class ConfigError(ValueError):
    """Invalid experiment configuration; message carries the offending key."""


def _require_int(raw: dict, key: str, minimum: int) -> int:
    if key not in raw:
        raise ConfigError(f"missing required key '{key}'")
    v = raw[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise ConfigError(f"'{key}' must be an integer, got {v!r}")
    if v < minimum:
        raise ConfigError(f"'{key}' must be >= {minimum}, got {v}")
    return v


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    trials: int
    master_seed: int
    output: str | None = None
    dims: tuple[int, int] | None = None
    s_values: tuple[int, ...] | None = None
    criterion: str | None = None
    ensemble: str | None = None
    n: int | None = None
    s: int | None = None
    body: str | None = None
    mode: str | None = None
    d: int | None = None
    d1: int | None = None
    d2: int | None = None
    gauge_tol: float = 1e-8
    raw: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        experiment = raw.get("experiment")
        if experiment not in EXPERIMENTS:
            raise ConfigError(
                f"'experiment' must be one of {sorted(EXPERIMENTS)}, got {experiment!r}"
            )
        allowed = _COMMON_KEYS | _KEYS_BY_EXPERIMENT[experiment]
        unknown = set(raw) - allowed
        if unknown:
            raise ConfigError(
                f"unknown key(s) {sorted(unknown)} for experiment '{experiment}'"
            )

        trials = _require_int(raw, "trials", 1)
        master_seed = _require_int(raw, "master_seed", 0)
        output = raw.get("output")
        if output is not None and not isinstance(output, str):
            raise ConfigError("'output' must be a string path")

        tol = raw.get("tolerances", {})
        if not isinstance(tol, dict):
            raise ConfigError("'tolerances' must be an object")
        bad = set(tol) - _TOLERANCE_KEYS
        if bad:
            raise ConfigError(f"unknown tolerance key(s) {sorted(bad)}")
        gauge_tol = float(tol.get("gauge_tol", 1e-8))
        if gauge_tol <= 0:
            raise ConfigError("'gauge_tol' must be positive")

        kwargs = dict(
            experiment=experiment,
            trials=trials,
            master_seed=master_seed,
            output=output,
            gauge_tol=gauge_tol,
            raw=dict(raw),
        )
        getattr(cls, "_check_" + experiment.replace("-", "_"))(raw, kwargs)
        return cls(**kwargs)

    # -- per-experiment validation ------------------------------------------

    @staticmethod
    def _check_threshold_scan(raw: dict, kw: dict) -> None:
        dims = raw.get("dims")
        if (
            not isinstance(dims, list)
            or len(dims) != 2
            or not all(isinstance(d, int) and d >= 2 for d in dims)
        ):
            raise ConfigError("'dims' must be a list of two integers >= 2")
        kw["dims"] = (dims[0], dims[1])

        sv = raw.get("s_values")
        if isinstance(sv, dict):
            bad = set(sv) - {"start", "stop", "step"}
            if bad:
                raise ConfigError(f"unknown s_values key(s) {sorted(bad)}")
            start = sv.get("start")
            stop = sv.get("stop")
            step = sv.get("step", 1)
            if not all(isinstance(v, int) for v in (start, stop, step)) or step < 1:
                raise ConfigError("'s_values' range needs integer start/stop and step >= 1")
            values = tuple(range(start, stop + 1, step))
        elif isinstance(sv, list) and sv and all(isinstance(v, int) for v in sv):
            values = tuple(sv)
        else:
            raise ConfigError("'s_values' must be a non-empty integer list or a start/stop/step object")
        if any(v < 1 for v in values):
            raise ConfigError("'s_values' must be positive")
        kw["s_values"] = values

        criterion = raw.get("criterion")
        if criterion not in ("exact", "ppt"):
            raise ConfigError("'criterion' must be 'exact' or 'ppt'")
        if criterion == "exact" and kw["dims"] not in EXACT_SCAN_DIMS:
            raise ConfigError(
                f"criterion 'exact' requires dims in {sorted(EXACT_SCAN_DIMS)}, got {kw['dims']}"
            )
        kw["criterion"] = criterion

    @staticmethod
    def _check_spectral(raw: dict, kw: dict) -> None:
        ensemble = raw.get("ensemble")
        if ensemble not in ("gue0", "induced"):
            raise ConfigError("'ensemble' must be 'gue0' or 'induced'")
        kw["ensemble"] = ensemble
        kw["n"] = _require_int(raw, "n", 2)
        if ensemble == "induced":
            kw["s"] = _require_int(raw, "s", 1)
        elif "s" in raw:
            raise ConfigError("'s' applies only to the induced ensemble")

    @staticmethod
    def _check_concentration(raw: dict, kw: dict) -> None:
        kw["d"] = _require_int(raw, "d", 2)
        kw["s"] = _require_int(raw, "s", 1)
        body = raw.get("body", "s0" if kw["d"] == 2 else "ppt0")
        if body not in ("s0", "d0", "ppt0"):
            raise ConfigError("'body' must be one of s0, d0, ppt0")
        if body == "s0" and kw["d"] != 2:
            raise ConfigError("body 's0' needs the exact gauge, available only at d = 2")
        kw["body"] = body

    @staticmethod
    def _check_gue_approx(raw: dict, kw: dict) -> None:
        kw["n"] = _require_int(raw, "n", 2)
        kw["s"] = _require_int(raw, "s", 1)
        body = raw.get("body")
        if body not in ("d0", "ppt0", "hs", "s0"):
            raise ConfigError("'body' must be one of d0, ppt0, hs, s0")
        if body == "s0" and kw["n"] != 4:
            raise ConfigError("body 's0' requires n = 4")
        if body == "ppt0":
            root = round(kw["n"] ** 0.5)
            if root * root != kw["n"]:
                raise ConfigError("body 'ppt0' requires n to be a perfect square")
        kw["body"] = body

    @staticmethod
    def _check_monotonicity(raw: dict, kw: dict) -> None:
        mode = raw.get("mode")
        if mode not in ("projection", "partial-trace"):
            raise ConfigError("'mode' must be 'projection' or 'partial-trace'")
        kw["mode"] = mode
        kw["s"] = _require_int(raw, "s", 1)
        if mode == "projection":
            kw["d1"] = _require_int(raw, "d1", 2)
            kw["d2"] = _require_int(raw, "d2", 2)
            if kw["d1"] > kw["d2"]:
                raise ConfigError("'d1' must be <= 'd2'")
            if "d" in raw:
                raise ConfigError("'d' applies only to partial-trace mode")
        else:
            kw["d"] = _require_int(raw, "d", 2)
            if "d1" in raw or "d2" in raw:
                raise ConfigError("'d1'/'d2' apply only to projection mode")

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
            ) from exc
        try:
            return cls.from_dict(raw)
        except ConfigError as exc:
            raise ConfigError(f"{path}: {exc}") from exc

    def digest(self) -> str:
        """sha256 of the canonical JSON form; identifies the run."""
        canon = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()
