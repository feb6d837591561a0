import numpy as np
import pytest

from nhskin.model import LatticeModel, HoppingTerm, builtin_2d
from nhskin.nonbloch import (
    AmoebaRaster,
    AmoebaSampling,
    amoeba_points,
    export_raster_csv,
    export_raster_pgm,
    has_hole,
    obc_member_2d,
)
from nhskin.realspace import OBC, build
from nhskin.spectral import dense_spectrum


def ring_raster(inner=8, outer=20, n=60):
    y, x = np.meshgrid(np.arange(n), np.arange(n))
    r = np.hypot(x - n / 2, y - n / 2)
    occ = (r >= inner) & (r <= outer)
    return AmoebaRaster(window=((-3, 3), (-3, 3)), resolution=(n, n), occupancy=occ, counts=occ.astype(np.int64))


def test_hole_detection_on_synthetic_rings():
    assert has_hole(ring_raster())
    filled = ring_raster(inner=0)
    assert not has_hole(filled)


def test_min_hole_cells_suppresses_pinholes():
    r = ring_raster(inner=0)
    r.occupancy[30, 30] = False  # single dead cell inside the body
    assert not has_hole(r, min_hole_cells=4)
    assert has_hole(r, min_hole_cells=1)


def test_hole_touching_border_does_not_count():
    n = 60
    occ = np.ones((n, n), dtype=bool)
    occ[20:40, 30:] = False  # notch open to the border
    r = AmoebaRaster(window=((-3, 3), (-3, 3)), resolution=(n, n), occupancy=occ, counts=occ.astype(np.int64))
    assert not has_hole(r)


def test_interior_energy_has_no_hole():
    m = builtin_2d(0.5, 1.0, 0.2)
    ev = dense_spectrum(build(m, [20, 20], OBC))
    e = ev[np.argmin(np.abs(ev - ev.mean()))]
    raster = amoeba_points(m, e, r_x_samples=150, phase_samples=300)
    assert not has_hole(raster)
    assert obc_member_2d(m, e, AmoebaSampling(r_x_samples=150, phase_samples=300))


def test_outside_energy_has_hole():
    m = builtin_2d(0.5, 1.0, 0.2)
    raster = amoeba_points(m, 4.5, r_x_samples=150, phase_samples=300)
    assert has_hole(raster)
    assert not obc_member_2d(m, 4.5, AmoebaSampling(r_x_samples=150, phase_samples=300))


def test_counts_live_inside_occupancy():
    m = builtin_2d(0.5, 1.0, 0.2)
    raster = amoeba_points(m, 1.0 + 0.5j, r_x_samples=80, phase_samples=160)
    assert raster.counts.sum() > 0
    assert raster.occupancy[raster.counts > 0].all()


def test_axis_swap_symmetry():
    # swapping the two axes of the model transposes the amoeba
    m = builtin_2d(0.6, 1.1, 0.15)
    swapped = LatticeModel(
        dimension=2,
        bands=1,
        terms=[
            HoppingTerm(offset=(t.offset[1], t.offset[0]), amplitude=t.amplitude)
            for t in m.terms
        ],
    )
    e = 0.9 + 0.2j
    a = amoeba_points(m, e, r_x_samples=120, phase_samples=240)
    b = amoeba_points(swapped, e, r_x_samples=120, phase_samples=240)
    mismatch = np.mean(a.occupancy != b.occupancy.T)
    assert mismatch < 0.02


def test_amoeba_requires_2d():
    from nhskin.model import builtin_hatano_nelson

    with pytest.raises(ValueError):
        amoeba_points(builtin_hatano_nelson(0.5, 1.0), 0.0)


def test_pgm_export(tmp_path):
    r = ring_raster(n=40)
    path = tmp_path / "ring.pgm"
    export_raster_pgm(r, path)
    data = path.read_bytes()
    assert data.startswith(b"P5\n40 40\n255\n")
    pixels = np.frombuffer(data.split(b"255\n", 1)[1], dtype=np.uint8)
    assert (pixels == 0).sum() == r.occupancy.sum()


def test_point_cloud_export(tmp_path):
    r = ring_raster(n=30)
    path = tmp_path / "cloud.csv"
    export_raster_csv(r, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "rx,log_abs_beta_y"
    assert len(lines) == 1 + r.occupancy.sum()
