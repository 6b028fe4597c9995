"""Slow definitional reference paths used to cross-check the fast ones.

Nothing here is optimized.  The tensor-product arithmetic spells out the
product law ``(U^a (x) U^b)(U^c (x) U^e) = sigma(a,c) sigma(e,b)
U^{a+c} (x) U^{e+b}`` term by term (second leg reversed), the
convolution helper accepts an arbitrary reduction matrix so alternative
presentations of the twist can be compared, and the FFT path checks the
untwisted degenerate case against an independent library routine.
"""

from __future__ import annotations

import numpy as np
from scipy.signal import fftconvolve

from .algebra import TorusElement
from .kernels import NCKernel
from .lattice import LatticeBox

__all__ = [
    "convolve_coefficients",
    "plain_convolution",
    "tensor_multiply",
    "one_tensor",
    "partial_trace_second",
    "apply_kernel_definitional",
]


def convolve_coefficients(
    matrix: np.ndarray,
    box_f: LatticeBox,
    f: np.ndarray,
    box_g: LatticeBox,
    g: np.ndarray,
) -> tuple:
    """Twisted convolution with an explicit reduction matrix, term by term.

    Returns (sum box, coefficients).  The matrix is used raw, so upper
    triangular or otherwise non-canonical presentations are accepted.
    """
    out_box = LatticeBox(box_f.d, box_f.radius + box_g.radius)
    out = np.zeros(out_box.cardinality, dtype=complex)
    pf = box_f.enumerate()
    pg = box_g.enumerate()
    for i, u in enumerate(pf):
        if f[i] == 0:
            continue
        for j, v in enumerate(pg):
            phase = np.exp(2j * np.pi * float(u @ matrix @ v))
            out[out_box.linear_index(u + v)] += f[i] * g[j] * phase
    return out_box, out


def plain_convolution(f: TorusElement, g: TorusElement) -> TorusElement:
    """Untwisted convolution via an FFT library routine (theta = 0 oracle)."""
    d = f.box.d
    grid_f = f.coeffs.reshape((f.box.side,) * d)
    grid_g = g.coeffs.reshape((g.box.side,) * d)
    full = fftconvolve(grid_f, grid_g, mode="full")
    box = LatticeBox(d, f.box.radius + g.box.radius)
    return TorusElement(f.theta, box, full.reshape(-1))


def tensor_multiply(k: NCKernel, l: NCKernel) -> NCKernel:
    """Product of two tensor-algebra elements, second leg reversed.

    Each coefficient pair contributes c_{a,b} d_{c,e} sigma(a,c)
    sigma(e,b) at index (a+c, e+b); the result lives on the Minkowski-sum
    boxes.  Quartic cost, intended for tiny boxes only.
    """
    if k.theta != l.theta:
        raise ValueError("kernels live over different deformation matrices")
    theta = k.theta.entries
    out1 = LatticeBox(k.box1.d, k.box1.radius + l.box1.radius)
    out2 = LatticeBox(k.box2.d, k.box2.radius + l.box2.radius)
    pa = k.box1.enumerate()
    pb = k.box2.enumerate()
    pc = l.box1.enumerate()
    pe = l.box2.enumerate()
    # sigma(a, c) and sigma(e, b) tables, then a full outer contraction
    ph_ac = np.exp(2j * np.pi * np.mod(pa @ theta @ pc.T, 1.0))
    ph_eb = np.exp(2j * np.pi * np.mod(pe @ theta @ pb.T, 1.0))
    contrib = np.einsum("ab,ce,ac,eb->abce", k.coeffs, l.coeffs, ph_ac, ph_eb)
    d = k.box1.d
    sums_ac = (pa[:, None, :] + pc[None, :, :]).reshape(-1, d)
    sums_eb = (pe[:, None, :] + pb[None, :, :]).reshape(-1, d)
    rows = out1.linear_indices(sums_ac).reshape(len(pa), len(pc))  # (a, c)
    cols = out2.linear_indices(sums_eb).reshape(len(pe), len(pb))  # (e, b)
    flat = np.zeros(out1.cardinality * out2.cardinality, dtype=complex)
    # flat index of (a,b,c,e) entry: row(a,c) * card2 + col(e,b)
    idx = (
        rows[:, None, :, None] * out2.cardinality
        + cols.T[None, :, None, :]
    )
    np.add.at(flat, idx.ravel(), contrib.ravel())
    return NCKernel(k.theta, out1, out2, flat.reshape(out1.cardinality, out2.cardinality))


def one_tensor(x: TorusElement) -> NCKernel:
    """The element 1 (x) x: first leg the unit on a radius-0 box."""
    unit_box = LatticeBox(x.box.d, 0)
    return NCKernel(x.theta, unit_box, x.box, x.coeffs[None, :].copy())


def partial_trace_second(k: NCKernel) -> TorusElement:
    """Apply the trace to the second leg: keep its coefficient at 0."""
    return TorusElement(k.theta, k.box1, k.coeffs[:, k.box2.center_index()].copy())


def apply_kernel_definitional(k: NCKernel, x: TorusElement) -> TorusElement:
    """The partial-trace definition of the kernel action, spelled out."""
    return partial_trace_second(tensor_multiply(k, one_tensor(x)))
