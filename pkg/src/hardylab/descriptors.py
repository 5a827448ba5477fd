"""Experiment descriptor schema: validation and object construction.

A descriptor is a JSON object binding a family, a system, a weight, a
rounding mode, an analysis kind and its parameters.  Validation reports
dotted field paths; building resolves builtin names through the catalog.
"""

from __future__ import annotations

from . import catalog
from .conditions import choose_weight
from .errors import SchemaError
from .germs import Family
from .patterns import BohrSet, ExplicitSet, PeriodicSet
from .rounding import RoundingMode
from .systems import BoxSet, CyclicRotation, QuadraticSkew, TorusRotation
from .weights import LADDER, make_weight

SCHEMA_VERSION = 1

ANALYSES = (
    "condition",
    "avg",
    "multicorr",
    "seminorm",
    "equi",
    "pattern",
    "return-set",
    "probe",
)


def _expect(cond, path, msg):
    if not cond:
        raise SchemaError(path, msg)


def validate(desc):
    _expect(isinstance(desc, dict), "$", "descriptor must be a JSON object")
    ver = desc.get("schema_version", SCHEMA_VERSION)
    _expect(ver == SCHEMA_VERSION, "schema_version", f"unsupported version {ver}")
    _expect("analysis" in desc, "analysis", "missing")
    _expect(desc["analysis"] in ANALYSES, "analysis",
            f"must be one of {', '.join(ANALYSES)}")
    if "rounding" in desc:
        _expect(str(desc["rounding"]).lower() in ("floor", "ceil", "nearest"),
                "rounding", "must be floor, ceil or nearest")
    if "grid" in desc:
        g = desc["grid"]
        _expect(isinstance(g, list) and g, "grid", "must be a nonempty list")
        _expect(all(isinstance(x, int) and x >= 1 for x in g), "grid",
                "entries must be positive integers")
        _expect(g == sorted(g), "grid", "must be ascending")
    if "weight" in desc:
        w = desc["weight"]
        _expect(w == "auto" or w in LADDER or w == "cesaro", "weight",
                f"must be 'auto' or one of {', '.join(LADDER)}")
    if "threads" in desc:
        _expect(isinstance(desc["threads"], int) and desc["threads"] >= 1,
                "threads", "must be a positive integer")
    if "precision" in desc:
        _expect(isinstance(desc["precision"], int) and 16 <= desc["precision"] <= 512,
                "precision", "digits must lie in [16, 512]")
    if "seed" in desc:
        _expect(isinstance(desc["seed"], int) and desc["seed"] >= 0, "seed",
                "must be a non-negative integer")
    return desc


class Experiment:
    """Resolved descriptor: concrete family/system/weight/set objects."""

    def __init__(self, desc):
        validate(desc)
        self.desc = desc
        self.analysis = desc["analysis"]
        self.mode = RoundingMode.parse(desc.get("rounding", "nearest"))
        self.grid = list(desc.get("grid", [1000, 10000, 100000, 1000000]))
        self.threads = int(desc.get("threads", 1))
        self.digits = int(desc.get("precision", 64))
        self.seed = int(desc.get("seed", 0))
        self.params = dict(desc.get("params", {}))
        self.family = self._build_family(desc.get("family"))
        self.system = self._build_system(desc.get("system"))
        self.weight_name = desc.get("weight", "t")
        self._weight = None

    # -- pieces -------------------------------------------------------------

    def _build_family(self, spec):
        if spec is None:
            return None
        if isinstance(spec, dict) and "builtin" in spec:
            return catalog.build_family(spec["builtin"], spec.get("params"))
        if isinstance(spec, dict):
            try:
                return Family.from_json(spec)
            except (KeyError, ValueError, TypeError, AttributeError) as e:
                raise SchemaError("family", f"bad family JSON: {e}")
        raise SchemaError("family", "must be an object")

    def _build_system(self, spec):
        if spec is None:
            return None
        _expect(isinstance(spec, dict), "system", "must be an object")
        if "builtin" in spec:
            return catalog.build_system(spec["builtin"], spec.get("params"))
        kind = spec.get("type")
        if kind == "cyclic":
            return CyclicRotation(int(spec["modulus"]), int(spec["shift"]))
        if kind in ("torus", "skew"):
            fam = self.family
            _expect(fam is not None, "system", "torus/skew need family constants")
            reg = fam.reg
            names = spec.get("alpha", [])
            _expect(isinstance(names, list) and names, "system.alpha",
                    "list of declared constant names")
            from .constants import SymbolicReal

            vals = []
            for nm in names:
                _expect(reg.has_symbol(nm), "system.alpha", f"unknown constant {nm!r}")
                vals.append(SymbolicReal.symbol(nm))
            if kind == "torus":
                return TorusRotation(reg, tuple(vals))
            return QuadraticSkew(reg, vals[0])
        raise SchemaError("system.type", f"unknown system type {kind!r}")

    def build_set(self, spec):
        _expect(isinstance(spec, dict), "set", "must be an object")
        kind = spec.get("type")
        if kind == "odds":
            return PeriodicSet.odds()
        if kind == "evens":
            return PeriodicSet.evens()
        if kind == "all":
            return PeriodicSet((True,), "all")
        if kind == "periodic":
            return PeriodicSet(spec["pattern"])
        if kind == "explicit":
            return ExplicitSet(spec.get("members", ()), spec.get("n_max"))
        if kind == "bohr":
            if spec.get("builtin") == "example2":
                return catalog.example2_bohr_set()
            if spec.get("builtin") == "example5":
                return catalog.example5_bohr_set(float(spec.get("eps", 0.01)))
            fam = self.family
            _expect(fam is not None, "set", "bohr sets need family constants")
            from .constants import SymbolicReal

            alphas = [SymbolicReal.symbol(nm) for nm in spec["constants"]]
            windows = [tuple(map(float, w)) for w in spec["windows"]]
            return BohrSet(fam.reg, alphas, [(u, (v - u) % 1.0 or (1.0 if v - u == 1 else 0.0)) for u, v in windows], self.digits)
        raise SchemaError("set.type", f"unknown set type {kind!r}")

    def box(self):
        spec = self.desc.get("box")
        _expect(spec is not None, "box", "analysis needs a box")
        return BoxSet.from_endpoints(spec)

    def cyclic_subset(self):
        spec = self.desc.get("subset")
        _expect(isinstance(spec, list), "subset", "list of residues required")
        return frozenset(int(x) for x in spec)

    @property
    def weight(self):
        if self._weight is None:
            reg = self.family.reg if self.family else catalog.sqrt2_registry()
            if self.weight_name == "auto":
                self._weight = choose_weight(self.family.germs())
            else:
                self._weight = make_weight(reg, self.weight_name)
        return self._weight

    def germs(self):
        _expect(self.family is not None, "family", "analysis needs a family")
        return self.family.germs()
