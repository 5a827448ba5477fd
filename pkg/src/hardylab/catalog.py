"""Built-in registry: named constants, golden example families and systems.

Families mirror the counterexample constructions exercised by the test
suite; each entry documents its parameter slots.  Instantiations pick
concrete quadratic surds so that every needed product of constants is
declared (complete tables over Q(sqrt2) / Q(sqrt2, sqrt3)) and condition
checking stays exact.
"""

from __future__ import annotations

from fractions import Fraction

from .constants import ConstantRegistry, SymbolicReal, quadratic_surd_registry
from .errors import SchemaError
from .germs import Exponent, Family, HardyExpr
from .patterns import BohrSet
from .systems import CyclicRotation, QuadraticSkew, TorusRotation

TOOL_VERSION = "hardylab 0.1.0"


def sqrt2_registry():
    return quadratic_surd_registry(2)


def sqrt2_minus_1(reg=None):
    return SymbolicReal({"sqrt2": Fraction(1), "1": Fraction(-1)})


def example1_family():
    """t -+ t^c with c = sqrt(1/2): floor-mode patterns avoid the odds.

    Slot: the exponent c (declared constant with c*c rational); instantiated
    at sqrt(1/2), which is never an integer power ratio, so n^c misses the
    integers for n >= 2.
    """
    reg = ConstantRegistry().declare("rho", {"sqrt": "1/2"})
    reg.declare_product("rho", "rho", SymbolicReal.rational(Fraction(1, 2)))
    c = Exponent(0, "rho")
    f1 = HardyExpr.t_power(reg, 1) - HardyExpr.t_power(reg, c)
    f2 = HardyExpr.t_power(reg, 1) + HardyExpr.t_power(reg, c)
    return Family(reg, {"f1": f1, "f2": f2})


def example2_family():
    """alpha^-1 t^2 + t and beta^-1(t^3 - alpha t + 1/2).

    Slots: alpha, beta (rationally independent irrationals, |.| <= 1/8);
    instantiated as sqrt2/16 and sqrt3/16 over Q(sqrt2, sqrt3).
    """
    reg = quadratic_surd_registry(2, 3)
    alpha = SymbolicReal.symbol("sqrt2", Fraction(1, 16))
    inv_alpha = SymbolicReal.symbol("sqrt2", 8)
    inv_beta = SymbolicReal.symbol("sqrt3", Fraction(16, 3))
    f1 = HardyExpr.polynomial(reg, [(2, inv_alpha), (1, 1)])
    f2 = HardyExpr.polynomial(
        reg,
        [
            (3, inv_beta),
            (1, reg.mul(inv_beta, alpha).scale(-1)),
            (0, inv_beta.scale(Fraction(1, 2))),
        ],
    )
    return Family(reg, {"f1": f1, "f2": f2})


def example2_constants():
    reg = quadratic_surd_registry(2, 3)
    alpha = SymbolicReal.symbol("sqrt2", Fraction(1, 16))
    beta = SymbolicReal.symbol("sqrt3", Fraction(1, 16))
    return reg, alpha, beta


def example2_bohr_set():
    reg, alpha, beta = example2_constants()
    return BohrSet(reg, [alpha, beta], [(0.0, 0.125), (0.0, 0.125)])


def example4_family():
    """t + sqrt(t) and t - sqrt(t): opposite floor parities off the squares."""
    reg = ConstantRegistry()
    f1 = HardyExpr.t_power(reg, 1) + HardyExpr.t_power(reg, Fraction(1, 2))
    f2 = HardyExpr.t_power(reg, 1) - HardyExpr.t_power(reg, Fraction(1, 2))
    return Family(reg, {"f1": f1, "f2": f2})


def example5_family():
    """t^(5/2) and (5/2) t^(3/2) + t: a derivative-linked pair."""
    reg = ConstantRegistry()
    f1 = HardyExpr.t_power(reg, Fraction(5, 2))
    f2 = HardyExpr.t_power(reg, Fraction(3, 2)).scale(Fraction(5, 2)) + HardyExpr.t_power(reg, 1)
    return Family(reg, {"f1": f1, "f2": f2})


def example5_combination(family=None):
    """Second-difference combination tending to 1.

    Terms (germ, shift, coeff) for f2(t+1) - f2(t) - f1(t+2) + 2 f1(t+1)
    - f1(t); the drift from the limit decays like t^(-1/2).
    """
    fam = family or example5_family()
    f1, f2 = fam.functions["f1"], fam.functions["f2"]
    return [(f2, 1, 1), (f2, 0, -1), (f1, 2, -1), (f1, 1, 2), (f1, 0, -1)]


def example5_bohr_set(eps=0.01):
    reg = sqrt2_registry()
    return BohrSet(reg, [sqrt2_minus_1()], [(0.0, float(eps))])


def example8_family(C=Fraction(1, 20)):
    """2 n alpha - 1/2 and 2 n alpha + 1/2 - 2C/n on the two-point system.

    Slots: alpha (irrational, instantiated sqrt2 - 1) and C > 0 (default
    1/20).  The return set is an infinite-or-empty set of zero Banach
    density.
    """
    C = Fraction(C)
    reg = sqrt2_registry()
    two_alpha = SymbolicReal({"sqrt2": Fraction(2), "1": Fraction(-2)})
    f1 = HardyExpr.polynomial(reg, [(1, two_alpha), (0, Fraction(-1, 2))])
    f2 = (
        HardyExpr.polynomial(reg, [(1, two_alpha), (0, Fraction(1, 2))])
        + HardyExpr.t_power(reg, -1).scale(-2 * C)
    )
    return Family(reg, {"f1": f1, "f2": f2})


def example8_reference_set(N, C=Fraction(1, 20)):
    """{n <= N : {n alpha - 1/2} < C/n} computed with certified arithmetic."""
    reg = sqrt2_registry()
    alpha = sqrt2_minus_1()
    bohr = BohrSet(reg, [alpha], [(0.0, 1.0)])  # frac machinery only
    out = []
    for n in range(1, N + 1):
        fv = (bohr.frac(n, 0) - 0.5) % 1.0
        if fv < float(C) / n + 1e-12:
            # near-threshold: re-check with exact comparison at high precision
            if _example8_member_certified(reg, alpha, n, C):
                out.append(n)
    return out


def _example8_member_certified(reg, alpha, n, C):
    import gmpy2

    from .constants import digits_to_bits

    bits = digits_to_bits(96) + n.bit_length()
    enc = reg.value_enclosure(alpha, bits)
    ctx = gmpy2.context(precision=bits)
    v = ctx.sub(ctx.mul(enc.mid, gmpy2.mpz(n)), gmpy2.mpq(1, 2))
    frac = ctx.sub(v, ctx.floor(v))
    thr = gmpy2.mpq(C.numerator, C.denominator * n)
    return frac < thr


def corollary_a2_family(exponents):
    """n^{c_1}, ..., n^{c_k} for positive exponents (rational slots)."""
    reg = ConstantRegistry()
    funcs = {}
    for i, c in enumerate(exponents):
        c = Fraction(c)
        if c <= 0:
            raise SchemaError(f"exponents[{i}]", "exponent must be positive")
        funcs[f"f{i + 1}"] = HardyExpr.t_power(reg, c)
    return Family(reg, funcs)


def corollary_b3_family():
    """t^(3/2), t^(4/3): the trend family for the recurrence lower bound."""
    reg = ConstantRegistry()
    return Family(
        reg,
        {
            "f1": HardyExpr.t_power(reg, Fraction(3, 2)),
            "f2": HardyExpr.t_power(reg, Fraction(4, 3)),
        },
    )


# ---------------------------------------------------------------------------
# systems


def two_point_system():
    return CyclicRotation(2, 1)


def torus_system(dim=1):
    reg = sqrt2_registry()
    return TorusRotation(reg, tuple(sqrt2_minus_1() for _ in range(dim)))


def skew_system():
    reg = sqrt2_registry()
    return QuadraticSkew(reg, sqrt2_minus_1())


# ---------------------------------------------------------------------------
# the catalog


FAMILIES = {
    "example1": {
        "build": lambda params: example1_family(),
        "slots": {"c": "exponent constant, default sqrt(1/2)"},
        "notes": "floor/ceil patterns miss the odds; nearest succeeds",
        "search": {"n_min": 2, "n_max": 10 ** 6, "a_max": 10 ** 6, "set": "odds"},
    },
    "example2": {
        "build": lambda params: example2_family(),
        "slots": {
            "alpha": "irrational, |alpha| <= 1/8 (default sqrt2/16)",
            "beta": "irrational, |beta| <= 1/8 (default sqrt3/16)",
        },
        "notes": "integer-coefficient relaxation fails; Bohr set has no triple",
        "search": {"n_min": 1, "n_max": 10 ** 5, "a_max": 10 ** 4, "set": "bohr:1/8"},
    },
    "example4": {
        "build": lambda params: example4_family(),
        "slots": {},
        "notes": "floor parities differ off the perfect squares",
    },
    "example5": {
        "build": lambda params: example5_family(),
        "slots": {"eps": "Bohr window width (default 0.01)"},
        "notes": "second difference tends to 1; shifted probe finds nothing",
        "search": {"n_min": 1, "n_max": 10 ** 5, "a_max": 10 ** 5, "ell": 2},
    },
    "example8": {
        "build": lambda params: example8_family(Fraction(params.get("C", "1/20"))),
        "slots": {"alpha": "irrational (default sqrt2-1)", "C": "positive rational, default 1/20"},
        "notes": "return set on the two-point system is sparse",
    },
    "corollaryA2": {
        "build": lambda params: corollary_a2_family(params.get("exponents", ["3/2", "2"])),
        "slots": {"exponents": "positive rationals c_1..c_k"},
        "notes": "mixed integer/non-integer powers",
    },
    "corollaryB3": {
        "build": lambda params: corollary_b3_family(),
        "slots": {},
        "notes": "recurrence trend family for the box-engine average",
    },
}

SYSTEMS = {
    "two_point": lambda params: two_point_system(),
    "torus_sqrt2m1": lambda params: torus_system(int(params.get("dim", 1))),
    "skew_sqrt2m1": lambda params: skew_system(),
}

CONSTANTS = {
    "sqrt2": {"sqrt": "2"},
    "sqrt3": {"sqrt": "3"},
    "sqrt6": {"sqrt": "6"},
    "sqrt2_minus_1": "sqrt2 - 1 (value of the torus/skew angle)",
    "rho": "sqrt(1/2) (example1 exponent)",
}


def build_family(name, params=None):
    entry = FAMILIES.get(name)
    if entry is None:
        raise SchemaError("family.builtin", f"unknown builtin family {name!r}")
    return entry["build"](params or {})


def build_system(name, params=None):
    entry = SYSTEMS.get(name)
    if entry is None:
        raise SchemaError("system.builtin", f"unknown builtin system {name!r}")
    return entry(params or {})


def list_builtins(filter_text=""):
    """Catalog dump for the CLI; filter is a substring match on names."""
    f = filter_text.lower()
    fams = {
        name: {
            "slots": meta["slots"],
            "notes": meta["notes"],
            **({"search": meta["search"]} if "search" in meta else {}),
        }
        for name, meta in sorted(FAMILIES.items())
        if f in name.lower()
    }
    systems = {name: {} for name in sorted(SYSTEMS) if f in name.lower()}
    constants = {k: v for k, v in sorted(CONSTANTS.items()) if f in k.lower()}
    return {"families": fams, "systems": systems, "constants": constants}
