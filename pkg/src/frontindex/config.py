"""Scenario configuration: flat ``key=value`` tokens with ``#`` comments.

Tokens are separated by whitespace and may share a line.  Values are plain
strings; lists use commas (``t_values=-1.03,-1.02``) and point lists use
semicolons between points (``points=0,0;0.1,-0.06``).

Environment variables override the file: ``FRONTINDEX_GRID``,
``FRONTINDEX_EPS_SING``, ``FRONTINDEX_EPS_DOT``, ``FRONTINDEX_EPS_DDOT``,
``FRONTINDEX_EPS_RANK`` and ``FRONTINDEX_ORACLE``.
"""

import os
from dataclasses import dataclass, field

from .errors import ParseError, RangeError

SCENARIOS = ("front_formula", "morin_map", "parallel_sweep", "blaschke", "poincare_hopf", "classify_patch")
FAMILIES = ("sphere", "torus", "bumpy", "rotational_gamma", "swallowtail")
MAPS = ("torus_fold", "torus_cover", "sin_v", "sphere_identity")
VECTOR_FIELDS = ("sphere_height", "torus_constant", "torus_random")

ENV_OVERRIDES = {
    "FRONTINDEX_GRID": "grid",
    "FRONTINDEX_EPS_SING": "eps_sing",
    "FRONTINDEX_EPS_DOT": "eps_dot",
    "FRONTINDEX_EPS_DDOT": "eps_ddot",
    "FRONTINDEX_EPS_RANK": "eps_rank",
    "FRONTINDEX_ORACLE": "oracle",
}


def _bool(s):
    low = s.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {s!r}")


def _floats(s):
    return tuple(float(x) for x in s.split(",") if x.strip())


def _points(s):
    pts = []
    for chunk in s.split(";"):
        if not chunk.strip():
            continue
        u, v = chunk.split(",")
        pts.append((float(u), float(v)))
    if not pts:
        raise ValueError("empty point list")
    return tuple(pts)


# key -> (converter, default)
KEYS = {
    "scenario": (str, None),
    "name": (str, None),
    "family": (str, None),
    "map": (str, None),
    "field": (str, None),
    "radius": (float, 1.0),
    "R": (float, 2.0),
    "r": (float, 1.0),
    "seed": (int, 0),
    "amplitude": (float, 0.08),
    "degree": (int, 3),
    "epsilon": (float, 17 / 80),
    "pole_axis": (str, "z"),
    "pole_cap": (float, 0.05),
    "half_width": (float, 1.0),
    "a": (float, 1.5),
    "k": (int, 2),
    "t": (float, None),
    "t_values": (_floats, None),
    "t_min": (float, None),
    "t_max": (float, None),
    "t_count": (int, 5),
    "points": (_points, ((0.0, 0.0), (0.1, -0.06))),
    "trials": (int, 20),
    "grid": (int, 256),
    "degree_grid": (int, None),
    "identity_grid": (int, 128),
    "jet_order": (int, 4),
    "oracle": (_bool, False),
    "oracle_seed": (int, 0),
    "eps_sing": (float, None),
    "eps_dot": (float, None),
    "eps_ddot": (float, None),
    "eps_rank": (float, None),
    "out": (str, None),
}


@dataclass
class ScenarioConfig:
    scenario: str
    values: dict = field(default_factory=dict)
    explicit: tuple = ()

    def __getattr__(self, name):
        try:
            return self.__dict__["values"][name]
        except KeyError:
            raise AttributeError(name) from None

    @property
    def tolerance_overrides(self):
        return {k: self.values[k] for k in ("eps_sing", "eps_dot", "eps_ddot", "eps_rank") if self.values.get(k) is not None}

    def echo(self):
        """Explicitly set keys plus the scenario, for the report."""
        return {k: _plain(self.values[k]) for k in sorted(set(self.explicit) | {"scenario"})}


def _plain(v):
    if isinstance(v, tuple):
        return [_plain(x) for x in v]
    return v


def _tokens(text):
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        col = 0
        while col < len(body):
            if body[col].isspace():
                col += 1
                continue
            end = col
            while end < len(body) and not body[end].isspace():
                end += 1
            yield lineno, col + 1, body[col:end]
            col = end


def parse_config(text, env=None):
    """Parse and validate a scenario; raises :class:`ParseError`/:class:`RangeError`."""
    env = os.environ if env is None else env
    raw, where = {}, {}
    for line, col, tok in _tokens(text):
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}", line, col)
        key, value = tok.split("=", 1)
        if key not in KEYS:
            raise ParseError(f"unknown key {key!r}", line, col)
        if key in raw:
            raise ParseError(f"duplicate key {key!r}", line, col)
        if value == "":
            raise ParseError(f"empty value for {key!r}", line, col + len(key) + 1)
        raw[key], where[key] = value, (line, col + len(key) + 1)
    if not raw:
        lines = text.splitlines()
        raise ParseError("empty configuration", max(1, len(lines)), 1)
    for var, key in ENV_OVERRIDES.items():
        if env.get(var):
            raw[key], where[key] = env[var], (None, None)
    values = {}
    for key, (conv, default) in KEYS.items():
        if key in raw:
            try:
                values[key] = conv(raw[key])
            except ValueError as exc:
                line, col = where[key]
                raise ParseError(f"bad value for {key!r}: {exc}", line, col) from None
        else:
            values[key] = default
    if "scenario" not in raw:
        raise ParseError("missing required key 'scenario'", 1, 1)
    cfg = ScenarioConfig(values["scenario"], values, tuple(raw))
    _validate(cfg, where)
    return cfg


def _fail(msg, key, where, cls=RangeError):
    line, col = where.get(key, (None, None))
    raise cls(msg, line, col)


def _validate(cfg, where):
    v = cfg.values
    if cfg.scenario not in SCENARIOS:
        _fail(f"unknown scenario {cfg.scenario!r}; expected one of {', '.join(SCENARIOS)}", "scenario", where, ParseError)
    needs_family = cfg.scenario in ("front_formula", "parallel_sweep", "blaschke", "classify_patch")
    if needs_family:
        if v["family"] is None:
            if cfg.scenario == "classify_patch":
                v["family"] = "swallowtail"
            else:
                _fail(f"scenario {cfg.scenario} needs 'family'", "scenario", where, ParseError)
        if v["family"] not in FAMILIES:
            _fail(f"unknown family {v['family']!r}", "family", where, ParseError)
    if cfg.scenario == "morin_map":
        if v["map"] is None:
            _fail("scenario morin_map needs 'map'", "scenario", where, ParseError)
        if v["map"] not in MAPS:
            _fail(f"unknown map {v['map']!r}", "map", where, ParseError)
    if cfg.scenario == "poincare_hopf":
        v["field"] = v["field"] or "sphere_height"
        if v["field"] not in VECTOR_FIELDS:
            _fail(f"unknown vector field {v['field']!r}", "field", where, ParseError)
    if cfg.scenario == "classify_patch" and v["family"] != "swallowtail":
        _fail("classify_patch runs on the swallowtail patch only", "family", where)
    if cfg.scenario in ("front_formula", "parallel_sweep", "blaschke") and v["family"] == "swallowtail":
        _fail("the swallowtail patch is not a closed surface", "family", where)
    if not 0.0 <= v["epsilon"] < 0.25:
        _fail("epsilon must satisfy 0 <= epsilon < 1/4 for a convex profile", "epsilon", where)
    if v["grid"] < 8 or v["grid"] % 2:
        _fail("grid must be an even integer >= 8", "grid", where)
    if v["degree_grid"] is not None and (v["degree_grid"] < 8 or v["degree_grid"] % 2):
        _fail("degree_grid must be an even integer >= 8", "degree_grid", where)
    if v["identity_grid"] < 4:
        _fail("identity_grid must be >= 4", "identity_grid", where)
    if not 2 <= v["jet_order"] <= 8:
        _fail("jet_order must lie in [2, 8]", "jet_order", where)
    if v["radius"] <= 0:
        _fail("radius must be positive", "radius", where)
    if not v["R"] > v["r"] > 0:
        _fail("torus needs R > r > 0", "R" if "R" in where else "r", where)
    if not 0.0 <= v["amplitude"] < 0.3:
        _fail("amplitude must lie in [0, 0.3)", "amplitude", where)
    if not 1 <= v["degree"] <= 6:
        _fail("degree must lie in [1, 6]", "degree", where)
    if v["pole_axis"] not in ("x", "y", "z"):
        _fail("pole_axis must be x, y or z", "pole_axis", where, ParseError)
    if not 0.0 < v["pole_cap"] < 0.5:
        _fail("pole_cap must lie in (0, 0.5)", "pole_cap", where)
    if v["trials"] < 1:
        _fail("trials must be >= 1", "trials", where)
    if v["t_count"] < 1:
        _fail("t_count must be >= 1", "t_count", where)
    for key in ("eps_sing", "eps_dot", "eps_ddot", "eps_rank"):
        if v[key] is not None and not v[key] > 0:
            _fail(f"{key} must be positive", key, where)
    if cfg.scenario == "parallel_sweep":
        if v["t_values"] is None:
            if v["t"] is not None:
                v["t_values"] = (v["t"],)
            elif v["t_min"] is not None and v["t_max"] is not None:
                n = v["t_count"]
                step = (v["t_max"] - v["t_min"]) / max(n - 1, 1)
                v["t_values"] = tuple(v["t_min"] + step * i for i in range(n))
            else:
                _fail("parallel_sweep needs t, t_values, or t_min/t_max", "scenario", where, ParseError)


def load_config(path, env=None):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), env)
