"""
JSON codec for hbinterp inputs and reports.

Complex numbers are [re, im] pairs, polynomials ascending lists of pairs,
rational functions {"num": [...], "den": [...]}, sequences
{"points": [...]} or {"family": {...}}. Non-finite floats become null.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from hbinterp.core.errors import DomainError
from hbinterp.numerics.disk import BlaschkeProduct, DiskSequence
from hbinterp.numerics.families import RadiiKind, SequenceFamily
from hbinterp.numerics.pair import BoundaryZeroSet, RationalPair
from hbinterp.numerics.polynomials import ComplexPoly
from hbinterp.numerics.rational import RationalFn
from hbinterp.numerics.series import AnalyticSeries


logger = logging.getLogger(__name__)

JsonComplex = Tuple[Optional[float], Optional[float]]

_FAMILY_KEYS = ("c", "beta", "q", "count", "values", "seed", "angle", "angles")


def encode_float(x: Any) -> Optional[float]:
    x = float(x)
    return x if math.isfinite(x) else None


def encode_complex(z: Any) -> JsonComplex:
    z = complex(z)
    return (encode_float(z.real), encode_float(z.imag))


def decode_complex(value: Any) -> complex:
    """[re, im], a real number or a {"re", "im"} mapping."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, dict) and "re" in value:
        return complex(float(value["re"]), float(value.get("im", 0.0)))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        if value[0] is None or value[1] is None:
            raise DomainError(f"Non-finite complex value {value}")
        return complex(float(value[0]), float(value[1]))
    raise DomainError(f"Cannot read a complex number from {value!r}")


def parse_complex(text: str) -> complex:
    """"re,im" or a Python complex literal such as "0.5+0.2j"."""
    text = text.strip()
    try:
        if "," in text:
            re, im = text.split(",", 1)
            return complex(float(re), float(im))
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as e:
        raise DomainError(f"Cannot read a complex number from '{text}'") from e


def encode_complex_list(values: Iterable[Any]) -> List[JsonComplex]:
    return [encode_complex(z) for z in np.atleast_1d(np.asarray(list(values), dtype=np.complex128))]


def decode_complex_list(values: Iterable[Any]) -> List[complex]:
    return [decode_complex(v) for v in values]


def encode_poly(p: ComplexPoly) -> List[JsonComplex]:
    return encode_complex_list(p.coeffs) if not p.is_zero else []


def decode_poly(values: Iterable[Any]) -> ComplexPoly:
    return ComplexPoly(decode_complex_list(values))


def encode_rational(f: RationalFn) -> Dict[str, List[JsonComplex]]:
    return {"num": encode_poly(f.num), "den": encode_poly(f.den)}


def decode_rational(data: Any, checked: bool = True) -> RationalFn:
    """{"num", "den"} (den defaults to 1) or a bare coefficient list."""
    if isinstance(data, list):
        data = {"num": data}
    if not isinstance(data, dict) or "num" not in data:
        raise DomainError("A rational function needs a 'num' coefficient list")
    num = decode_complex_list(data["num"])
    den = decode_complex_list(data.get("den") or [1.0])
    if checked:
        return RationalFn.checked(num, den)
    return RationalFn(num=ComplexPoly(num), den=ComplexPoly(den))


def encode_zeros(zeros: BoundaryZeroSet) -> List[Dict[str, Any]]:
    return [{"zeta": encode_complex(z), "multiplicity": m} for z, m in zeros.items()]


def decode_zeros(values: Iterable[Any]) -> BoundaryZeroSet:
    pairs = []
    for item in values:
        if isinstance(item, dict):
            pairs.append((decode_complex(item["zeta"]), int(item.get("multiplicity", 1))))
        else:
            pairs.append((decode_complex(item[0]), int(item[1])))
    return BoundaryZeroSet.from_pairs(pairs)


def encode_pair(pair: RationalPair) -> Dict[str, Any]:
    return {
        "b": encode_rational(pair.b),
        "a": encode_rational(pair.a),
        "zeros": encode_zeros(pair.zeros),
    }


def decode_pair(data: Dict[str, Any]) -> RationalPair:
    """A pair document, or a report carrying one under "pair"."""
    if "pair" in data and isinstance(data["pair"], dict):
        data = data["pair"]
    for key in ("b", "a", "zeros"):
        if key not in data:
            raise DomainError(f"Pair document has no '{key}' entry")
    return RationalPair(
        b=decode_rational(data["b"], checked=False),
        a=decode_rational(data["a"], checked=False),
        zeros=decode_zeros(data["zeros"]),
    ).checked()


def encode_family(family: SequenceFamily) -> Dict[str, Any]:
    return family.model_dump(mode="json", exclude_none=True)


def decode_family(data: Dict[str, Any]) -> SequenceFamily:
    try:
        return SequenceFamily(**data)
    except ValidationError as e:
        raise DomainError(f"Invalid family descriptor: {e.errors()[0]['msg']}") from e


def encode_sequence(seq: DiskSequence) -> Dict[str, Any]:
    if seq.family is not None:
        return {"family": encode_family(seq.family)}
    return {"points": encode_complex_list(seq.points)}


def decode_sequence(data: Any) -> DiskSequence:
    """{"points": [...]} or {"family": {...}}; a bare list is read as points."""
    if isinstance(data, list):
        return DiskSequence.explicit(decode_complex_list(data))
    if "family" in data:
        family = decode_family(data["family"])
        return DiskSequence.from_family(family)
    if "points" in data:
        return DiskSequence.explicit(decode_complex_list(data["points"]))
    raise DomainError("A sequence needs 'points' or 'family'")


def decode_function(data: Any) -> AnalyticSeries:
    """
    A function of H^2: {"num", "den"} (rational), {"blaschke": points} or
    {"coefficients": [...], "tail_bound": t} (truncated series).
    """
    if isinstance(data, dict) and "blaschke" in data:
        return AnalyticSeries.from_blaschke(BlaschkeProduct.from_points(decode_complex_list(data["blaschke"])))
    if isinstance(data, dict) and "coefficients" in data:
        return AnalyticSeries.from_coefficients(
            decode_complex_list(data["coefficients"]), float(data.get("tail_bound", 0.0))
        )
    f = decode_rational(data)
    if f.is_polynomial and f.den.degree == 0:
        return AnalyticSeries.from_polynomial(f.num * (1.0 / f.den.coeffs[0]))
    return AnalyticSeries.from_rational(f)


def parse_family(text: str) -> SequenceFamily:
    """
    Parse "kind:key=value,..." such as "power:c=1,beta=1,count=64".

    Keys: c, beta, q, count, values (radii separated by ';'), seed
    (Steinhaus angles) and angle or angles (fixed angles, ';'-separated).
    """
    kind, _, rest = text.partition(":")
    try:
        RadiiKind(kind.strip())
    except ValueError as e:
        raise DomainError(f"Unknown family kind '{kind}'") from e

    data: Dict[str, Any] = {"kind": kind.strip()}
    angles: Dict[str, Any] = {}
    for item in filter(None, (part.strip() for part in rest.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise DomainError(f"Family parameter '{item}' is not key=value")
        key = key.strip()
        if key not in _FAMILY_KEYS:
            raise DomainError(f"Unknown family parameter '{key}'")
        try:
            if key in ("c", "beta", "q"):
                data[key] = float(value)
            elif key == "count":
                data[key] = int(value)
            elif key == "values":
                data[key] = [float(v) for v in value.split(";") if v]
            elif key == "seed":
                angles = {"mode": "steinhaus", "seed": int(value)}
            else:
                angles = {"mode": "fixed", "values": [float(v) for v in value.split(";") if v]}
        except ValueError as e:
            raise DomainError(f"Bad value for family parameter '{key}': {value}") from e
    if angles:
        data["angles"] = angles
    return decode_family(data)


def to_jsonable(value: Any) -> Any:
    """Recursively replaces numpy, complex and non-finite values by JSON natives."""
    if isinstance(value, BaseModel):
        return to_jsonable(value.model_dump(mode="json"))
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return list(encode_complex(value))
    if isinstance(value, (float, np.floating)):
        return encode_float(value)
    return value


def dumps(data: Any) -> str:
    """Deterministic JSON: key order kept, shortest round-trip floats."""
    return json.dumps(to_jsonable(data), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def load_json(path: Union[str, Path]) -> Any:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Input file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise DomainError(f"{path} is not valid JSON: {e}") from e
