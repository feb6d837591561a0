"""Tight-binding lattice models as Laurent-polynomial matrix functions.

A model is a finite list of hopping terms: an integer unit-cell offset Delta
together with a BxB amplitude matrix A_Delta (the coefficient of
c^dag_n c_{n+Delta}).  The Bloch matrix is H(k) = sum_Delta A_Delta e^{i k.Delta}
and its analytic continuation replaces e^{ik_i} by a general nonzero complex
beta_i.  Sign convention is fixed so the asymmetric-hopping chain built by
``builtin_hatano_nelson`` has dispersion (J_L+J_R) cos k + i (J_L-J_R) sin k.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import ModelFormatError

Offset = Tuple[int, ...]


@dataclass(frozen=True)
class HoppingTerm:
    """One hopping term: unit-cell displacement plus BxB amplitude block."""

    offset: Offset
    amplitude: np.ndarray

    def __post_init__(self):
        off = tuple(int(x) for x in self.offset)
        amp = np.array(self.amplitude, dtype=complex)
        if amp.ndim != 2 or amp.shape[0] != amp.shape[1]:
            raise ModelFormatError(f"amplitude for offset {off} must be a square matrix")
        amp.setflags(write=False)
        object.__setattr__(self, "offset", off)
        object.__setattr__(self, "amplitude", amp)

    @property
    def bands(self) -> int:
        return self.amplitude.shape[0]


@dataclass(frozen=True)
class LatticeModel:
    """Immutable lattice model; duplicate offsets are merged by summation."""

    dimension: int
    bands: int
    terms: Tuple[HoppingTerm, ...]
    name: Optional[str] = None

    def __post_init__(self):
        d, B = int(self.dimension), int(self.bands)
        if d not in (1, 2):
            raise ModelFormatError(f"dimension must be 1 or 2, got {d}")
        if B < 1:
            raise ModelFormatError(f"bands must be >= 1, got {B}")
        merged: Dict[Offset, np.ndarray] = {}
        for i, t in enumerate(self.terms):
            if not isinstance(t, HoppingTerm):
                t = HoppingTerm(*t)
            if len(t.offset) != d:
                raise ModelFormatError(
                    f"terms[{i}]: offset length {len(t.offset)} != dimension {d}"
                )
            if t.bands != B:
                raise ModelFormatError(
                    f"terms[{i}]: amplitude is {t.bands}x{t.bands}, expected {B}x{B}"
                )
            if t.offset in merged:
                merged[t.offset] = merged[t.offset] + t.amplitude
            else:
                merged[t.offset] = np.array(t.amplitude)
        clean = tuple(
            HoppingTerm(off, amp) for off, amp in sorted(merged.items())
        )
        if not clean or all(np.all(t.amplitude == 0) for t in clean):
            raise ModelFormatError("model has no nonzero hopping term")
        object.__setattr__(self, "dimension", d)
        object.__setattr__(self, "bands", B)
        object.__setattr__(self, "terms", clean)


# ------------------------------------------------------------------ built-ins


def builtin_hatano_nelson(J_L: float, J_R: float) -> LatticeModel:
    """Single-band chain with asymmetric nearest-neighbour hopping.

    J_L multiplies the +1 offset (hop to the left on the bra side), J_R the
    -1 offset.  J_L = J_R is simply the Hermitian chain.
    """
    return LatticeModel(
        dimension=1,
        bands=1,
        terms=(
            HoppingTerm((1,), [[J_L]]),
            HoppingTerm((-1,), [[J_R]]),
        ),
        name="hatano-nelson",
    )


def builtin_nh_ssh(t1: float, t2: float, gamma: float) -> LatticeModel:
    """Two-band chain: asymmetric intra-cell bond t1 +/- gamma, Hermitian
    inter-cell bond t2 connecting B_n with A_{n+1}."""
    return LatticeModel(
        dimension=1,
        bands=2,
        terms=(
            HoppingTerm((0,), [[0.0, t1 + gamma], [t1 - gamma, 0.0]]),
            HoppingTerm((1,), [[0.0, 0.0], [t2, 0.0]]),
            HoppingTerm((-1,), [[0.0, t2], [0.0, 0.0]]),
        ),
        name="nh-ssh",
    )


def builtin_2d(J_L: float, J_R: float, tp: float) -> LatticeModel:
    """Single-band square lattice: opposite hopping asymmetry along x and y
    (J_L at (+1,0) and (0,-1); J_R at (-1,0) and (0,+1)) plus symmetric
    diagonal hopping tp on all four diagonals."""
    terms = [
        HoppingTerm((1, 0), [[J_L]]),
        HoppingTerm((0, -1), [[J_L]]),
        HoppingTerm((-1, 0), [[J_R]]),
        HoppingTerm((0, 1), [[J_R]]),
    ]
    for off in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        terms.append(HoppingTerm(off, [[tp]]))
    return LatticeModel(dimension=2, bands=1, terms=tuple(terms), name="asym2d")


# ------------------------------------------------------------------ evaluation


def bloch(model: LatticeModel, k) -> np.ndarray:
    """Bloch matrix H(k) = sum_Delta A_Delta e^{i k.Delta}; 2pi-periodic."""
    kv = np.atleast_1d(np.asarray(k, dtype=float))
    if kv.shape != (model.dimension,):
        raise ValueError(
            f"k has shape {kv.shape}, model dimension is {model.dimension}"
        )
    H = np.zeros((model.bands, model.bands), dtype=complex)
    for t in model.terms:
        H += t.amplitude * np.exp(1j * float(np.dot(kv, t.offset)))
    return H


def nonbloch(model: LatticeModel, beta) -> np.ndarray:
    """Analytic continuation H(beta) = sum_Delta A_Delta prod_i beta_i^Delta_i."""
    bv = np.atleast_1d(np.asarray(beta, dtype=complex))
    if bv.shape != (model.dimension,):
        raise ValueError(
            f"beta has shape {bv.shape}, model dimension is {model.dimension}"
        )
    if np.any(bv == 0):
        raise ValueError("beta components must be nonzero (negative powers occur)")
    H = np.zeros((model.bands, model.bands), dtype=complex)
    for t in model.terms:
        H += t.amplitude * np.prod(bv ** np.array(t.offset))
    return H


def bloch_samples(model: LatticeModel, ks: np.ndarray) -> np.ndarray:
    """Vectorized Bloch matrices, shape (len(ks), B, B); ks is (n, d)."""
    ks = np.asarray(ks, dtype=float).reshape(-1, model.dimension)
    out = np.zeros((ks.shape[0], model.bands, model.bands), dtype=complex)
    for t in model.terms:
        phase = np.exp(1j * ks @ np.asarray(t.offset, dtype=float))
        out += phase[:, None, None] * t.amplitude
    return out


# -------------------------------------------------- characteristic polynomial


@dataclass
class CharPoly:
    """Laurent coefficient table of det[E - H(beta)] for a fixed E.

    coeffs maps integer exponent tuples (possibly negative entries) to
    complex coefficients; nvars is 1 or 2.
    """

    nvars: int
    coeffs: Dict[Offset, complex] = field(default_factory=dict)

    def evaluate(self, beta) -> complex:
        bv = np.atleast_1d(np.asarray(beta, dtype=complex))
        return complex(
            sum(c * np.prod(bv ** np.array(e)) for e, c in self.coeffs.items())
        )

    def exponent_range(self, var: int) -> Tuple[int, int]:
        exps = [e[var] for e in self.coeffs]
        return (min(exps), max(exps))

    def univariate_coeffs(self):
        """For nvars == 1: (q, c) with c[j] the coefficient of beta^(j - q).

        Multiplying by beta^q clears denominators, so c is the ordinary
        polynomial's coefficient array in ascending powers.
        """
        if self.nvars != 1:
            raise ValueError("univariate_coeffs requires a 1-variable table")
        lo, hi = self.exponent_range(0)
        q = max(0, -lo)
        c = np.zeros(hi + q + 1, dtype=complex)
        for (e,), v in self.coeffs.items():
            c[e + q] = v
        return q, c


def _poly_mul(a: Dict[Offset, complex], b: Dict[Offset, complex]) -> Dict[Offset, complex]:
    out: Dict[Offset, complex] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            out[key] = out.get(key, 0.0) + ca * cb
    return out


def char_poly(model: LatticeModel, E: complex) -> CharPoly:
    """Expand det[E - H(beta)] over Laurent monomials in beta."""
    B, d = model.bands, model.dimension
    zero: Offset = (0,) * d
    # entry (i, j) of E*I - H as a Laurent dict
    entries = [[{} for _ in range(B)] for _ in range(B)]
    for t in model.terms:
        for i in range(B):
            for j in range(B):
                a = t.amplitude[i, j]
                if a != 0:
                    entries[i][j][t.offset] = entries[i][j].get(t.offset, 0.0) - a
    for i in range(B):
        entries[i][i][zero] = entries[i][i].get(zero, 0.0) + complex(E)

    def det(rows, cols) -> Dict[Offset, complex]:
        if len(rows) == 1:
            return dict(entries[rows[0]][cols[0]])
        acc: Dict[Offset, complex] = {}
        r0 = rows[0]
        for pos, c in enumerate(cols):
            e = entries[r0][c]
            if not e:
                continue
            minor = det(rows[1:], cols[:pos] + cols[pos + 1 :])
            sign = -1.0 if pos % 2 else 1.0
            for key, v in _poly_mul(e, minor).items():
                acc[key] = acc.get(key, 0.0) + sign * v
        return acc

    coeffs = det(tuple(range(B)), tuple(range(B)))
    coeffs = {e: complex(c) for e, c in coeffs.items() if c != 0}
    if not coeffs:
        coeffs = {zero: 0.0}
    return CharPoly(nvars=d, coeffs=coeffs)


# ------------------------------------------------------------------ JSON form


def model_to_dict(model: LatticeModel) -> dict:
    doc = {
        "dimension": model.dimension,
        "bands": model.bands,
        "terms": [
            {
                "offset": list(t.offset),
                "amplitude": [
                    [{"re": float(v.real), "im": float(v.imag)} for v in row]
                    for row in t.amplitude
                ],
            }
            for t in model.terms
        ],
    }
    if model.name is not None:
        doc["name"] = model.name
    return doc


def model_from_dict(doc: dict) -> LatticeModel:
    if not isinstance(doc, dict):
        raise ModelFormatError("model document must be a JSON object")
    for key in ("dimension", "bands", "terms"):
        if key not in doc:
            raise ModelFormatError(f"missing required field {key!r}")
    d = doc["dimension"]
    B = doc["bands"]
    if not isinstance(d, int) or not isinstance(B, int):
        raise ModelFormatError("dimension and bands must be integers")
    raw_terms = doc["terms"]
    if not isinstance(raw_terms, list) or not raw_terms:
        raise ModelFormatError("terms must be a non-empty list")
    terms = []
    for i, t in enumerate(raw_terms):
        where = f"terms[{i}]"
        if not isinstance(t, dict) or "offset" not in t or "amplitude" not in t:
            raise ModelFormatError(f"{where}: needs offset and amplitude")
        off = t["offset"]
        if (
            not isinstance(off, list)
            or len(off) != d
            or not all(isinstance(x, int) for x in off)
        ):
            raise ModelFormatError(f"{where}.offset: expected {d} integers")
        amp = t["amplitude"]
        if not isinstance(amp, list) or len(amp) != B:
            raise ModelFormatError(f"{where}.amplitude: expected {B}x{B} matrix")
        rows = []
        for r, row in enumerate(amp):
            if not isinstance(row, list) or len(row) != B:
                raise ModelFormatError(f"{where}.amplitude[{r}]: expected {B} entries")
            vals = []
            for c, cell in enumerate(row):
                if not isinstance(cell, dict) or "re" not in cell or "im" not in cell:
                    raise ModelFormatError(
                        f"{where}.amplitude[{r}][{c}]: expected {{re, im}}"
                    )
                vals.append(complex(float(cell["re"]), float(cell["im"])))
            rows.append(vals)
        terms.append(HoppingTerm(tuple(off), rows))
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise ModelFormatError("name must be a string when present")
    try:
        return LatticeModel(dimension=d, bands=B, terms=tuple(terms), name=name)
    except ModelFormatError:
        raise
    except Exception as exc:  # defensive: wrap stray construction errors
        raise ModelFormatError(str(exc)) from exc


def load_model(path) -> LatticeModel:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"invalid JSON in {path}: {exc}") from exc
    return model_from_dict(doc)


def save_model(model: LatticeModel, path) -> None:
    with open(path, "w") as fh:
        json.dump(model_to_dict(model), fh, indent=2)
        fh.write("\n")
