"""State-profile analytics and the skin-vs-topological classifier.

Right-eigenvector density alone cannot tell a skin state from a topological
end state: both pile up at a boundary.  The biorthogonal density
<L|proj_n|R> separates them — it stays delocalized for skin states (its
participation ratio grows with system size) and stays boundary-pinned for
genuine topological modes.  Weights can be negative or complex, so the
participation ratio is taken on their absolute values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .errors import EPVicinityError
from .realspace import IndexMap, RealSpaceOperator

SKIN = "skin"
TOPOLOGICAL = "topological_boundary"
BULK = "bulk"


def _index_map(obj) -> IndexMap:
    if isinstance(obj, IndexMap):
        return obj
    if isinstance(obj, RealSpaceOperator):
        return obj.index_map
    raise TypeError("expected an IndexMap or RealSpaceOperator")


@dataclass
class SiteProfile:
    """Cell-resolved, orbital-summed weights of one state.

    kind 'right'/'left': nonnegative reals summing to 1.
    kind 'biorthogonal': complex weights summing to 1 (by <L|R> = 1).
    """

    weights: np.ndarray
    kind: str
    shape: Tuple[int, ...] = field(default=())

    @property
    def n_cells(self) -> int:
        return len(self.weights)

    @property
    def normalization(self) -> complex:
        return complex(self.weights.sum())


def _cell_sum(values: np.ndarray, imap: IndexMap) -> np.ndarray:
    out = np.zeros(imap.n_cells, dtype=values.dtype)
    np.add.at(out, imap.cell_index_of_rows(), values)
    return out


def density_profile(state, index_map) -> SiteProfile:
    """|psi_n|^2 per cell, orbitals summed, normalized to 1."""
    imap = _index_map(index_map)
    psi = np.asarray(state, dtype=complex).ravel()
    nrm2 = float(np.vdot(psi, psi).real)
    if nrm2 == 0:
        raise ValueError("cannot profile the zero vector")
    w = _cell_sum(np.abs(psi) ** 2, imap) / nrm2
    return SiteProfile(weights=w.real, kind="right", shape=imap.sizes)


def biorthogonal_density(L, R, index_map) -> SiteProfile:
    """Complex weights conj(L)_n R_n / <L|R> per cell.

    Refuses when |<L|R>| < 1e-12: that is the fingerprint of an exceptional
    point, where matched left/right pairs stop spanning the space and the
    biorthogonal decomposition is meaningless.
    """
    imap = _index_map(index_map)
    l = np.asarray(L, dtype=complex).ravel()
    r = np.asarray(R, dtype=complex).ravel()
    ip = np.vdot(l, r)
    if abs(ip) < 1e-12:
        raise EPVicinityError(
            f"|<L|R>| = {abs(ip):.3e} is below 1e-12; biorthogonal profile refused"
        )
    w = _cell_sum(np.conj(l) * r, imap) / ip
    return SiteProfile(weights=w, kind="biorthogonal", shape=imap.sizes)


def decay_fit(profile: SiteProfile, window) -> dict:
    """Least-squares slope of ln(weights) over a site window.

    rate > 0 means growth toward the right; r_squared reports fit quality.
    """
    a, b = int(window[0]), int(window[1])
    if not (0 <= a < b <= profile.n_cells):
        raise ValueError(f"window {window} not inside [0, {profile.n_cells})")
    if b - a < 5:
        raise ValueError("window must span at least 5 sites")
    w = np.abs(np.asarray(profile.weights))[a:b]
    if np.any(w <= 0):
        raise ValueError("nonpositive weights in window; cannot fit log-decay")
    x = np.arange(a, b, dtype=float)
    y = np.log(w)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float((resid**2).sum()) / ss_tot if ss_tot > 0 else 1.0
    return {"rate": float(slope), "r_squared": r2}


def participation_ratio(profile: SiteProfile) -> float:
    """PR of |weights| (normalized); n_cells for uniform, 1 for a point."""
    p = np.abs(np.asarray(profile.weights))
    s = p.sum()
    if s == 0:
        raise ValueError("all-zero profile")
    p = p / s
    return float(1.0 / np.sum(p**2))


@dataclass(frozen=True)
class Thresholds:
    """Classifier cutoffs; the defaults were validated on the built-ins.

    edge_region: outer fraction of cells per side counted as 'edge'.
    edge_fraction: minimal edge weight for a boundary-accumulated state.
    pr_scale: biorthogonal PR below pr_scale * n_cells counts as localized.
    """

    edge_fraction: float = 0.5
    pr_scale: float = 0.2
    edge_region: float = 0.1


@dataclass(frozen=True)
class StateClass:
    label: str
    side: Optional[str]
    metrics: dict


def _edge_masses(weights: np.ndarray, edge_region: float):
    n = len(weights)
    ne = max(1, int(np.ceil(edge_region * n)))
    w = np.abs(weights)
    total = w.sum()
    return float(w[:ne].sum() / total), float(w[-ne:].sum() / total)


def classify_state(L, R, index_map, thresholds: Thresholds | None = None) -> StateClass:
    """Skin / topological-boundary / bulk verdict for one matched pair.

    Skin: right profile boundary-accumulated while the biorthogonal profile
    stays delocalized.  Topological boundary: both are boundary-localized
    (side taken from the biorthogonal profile, which may differ from the
    right-vector side when left and right states live on opposite ends).
    Bulk: everything else.  Exceptional-point refusals propagate.
    """
    th = thresholds or Thresholds()
    imap = _index_map(index_map)
    right = density_profile(R, imap)
    bio = biorthogonal_density(L, R, imap)
    lf, rf = _edge_masses(right.weights, th.edge_region)
    edge = max(lf, rf)
    pr = participation_ratio(bio)
    n = imap.n_cells
    metrics = {
        "right_edge_fraction": edge,
        "biorthogonal_participation_ratio_scaled": pr / n,
    }
    if edge > th.edge_fraction and pr > th.pr_scale * n:
        side = "right" if rf >= lf else "left"
        return StateClass(label=SKIN, side=side, metrics=metrics)
    if edge > th.edge_fraction and pr <= th.pr_scale * n:
        blf, brf = _edge_masses(bio.weights, th.edge_region)
        side = "right" if brf >= blf else "left"
        return StateClass(label=TOPOLOGICAL, side=side, metrics=metrics)
    return StateClass(label=BULK, side=None, metrics=metrics)


def classify_spectrum(system, op, thresholds: Thresholds | None = None):
    """classify_state over every matched pair of a BiorthogonalSystem."""
    imap = _index_map(op)
    return [
        classify_state(system.left[:, i], system.right[:, i], imap, thresholds)
        for i in range(system.n)
    ]


def export_profiles_csv(path, profiles, labels=None) -> None:
    """site index, Re(weight), Im(weight), kind tag — one block per profile."""
    from .io import write_csv

    rows = []
    for j, prof in enumerate(profiles):
        tag = labels[j] if labels else prof.kind
        for n, w in enumerate(np.asarray(prof.weights, dtype=complex)):
            rows.append((n, float(w.real), float(w.imag), tag))
    write_csv(path, ["site", "re_weight", "im_weight", "kind"], rows)
