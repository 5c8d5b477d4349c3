"""Nearest-point projection onto a manifold and its implicit-function Jacobian.

For a chart sigma and an ambient point w the projection solves the stationarity
condition

    G(u, w) = d_sigma(u)^T (sigma(u) - w) = 0

and differentiates it implicitly:

    dG/du = d_sigma^T d_sigma - sum_n (w - sigma)_n dd_sigma_n
    dG/dw = -d_sigma^T
    dz/dw = -d_sigma (dG/du)^{-1} dG/dw = d_sigma (dG/du)^{-1} d_sigma^T
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from config.errors import ProjectionError, ShapeError, SingularJacobianError
from diffcore.custom import custom_gradient_node
from diffcore.ops import Operand
from diffcore.tape import Tensor
from manifold.atlas import ManifoldAtlas
from manifold.charts import TWO_PI, Chart

logger = logging.getLogger(__name__)

DEGENERATE_RADIUS = 1e-12
NEWTON_TOL = 1e-10
NEWTON_MAX_ITER = 50
MAX_CONDITION = 1e12


@dataclass
class ProjectionResult:
    """Nearest point z*, its chart coordinates and dz*/dw."""
    z: np.ndarray
    chart_id: int
    u: np.ndarray
    jacobian: np.ndarray
    residual: float
    degenerate: bool = False


def stationarity(chart: Chart, u: np.ndarray, w: np.ndarray) -> np.ndarray:
    sigma, d, _ = chart.evaluate(u)
    return d.T @ (sigma - w)


def _stationarity_jacobian(sigma: np.ndarray, d: np.ndarray, dd: np.ndarray, w: np.ndarray) -> np.ndarray:
    return d.T @ d - np.einsum("n,nij->ij", w - sigma, dd)


def projection_jacobian(u: np.ndarray, chart_id: int, w: np.ndarray, atlas: ManifoldAtlas) -> np.ndarray:
    """
    dz*/dw at a converged projection, by the implicit function theorem.

    Args:
        u: Chart coordinates of z*
        chart_id: Chart holding u
        w: Ambient point that was projected
        atlas: The manifold

    Returns:
        (N, N) Jacobian; its columns lie in the tangent space at z*

    Raises:
        SingularJacobianError: If dG/du is singular (w near the medial set)
    """
    chart = atlas.chart(chart_id)
    sigma, d, dd = chart.evaluate(u)
    w = np.asarray(w, dtype=np.float64)
    hess = _stationarity_jacobian(sigma, d, dd, w)
    condition = float(np.linalg.cond(hess))
    if not np.isfinite(condition) or condition > MAX_CONDITION:
        raise SingularJacobianError(
            f"projection Jacobian is singular at u={u} (condition {condition:.3e})",
            condition=condition,
        )
    return d @ np.linalg.solve(hess, d.T)


def _circle_block(w2: np.ndarray) -> tuple[np.ndarray, float, np.ndarray, bool]:
    """Projection of one circle pair: (z, angle, Jacobian block, degenerate)."""
    radius = float(np.hypot(w2[0], w2[1]))
    if radius < DEGENERATE_RADIUS:
        return np.array([1.0, 0.0]), 0.0, np.zeros((2, 2)), True
    z = w2 / radius
    angle = float(np.mod(np.arctan2(z[1], z[0]), TWO_PI))
    return z, angle, (np.eye(2) - np.outer(z, z)) / radius, False


def project_analytic(w, atlas: ManifoldAtlas) -> ProjectionResult:
    """
    Closed-form nearest point for the analytic tags.

    Circle pairs are normalized one by one; the cylinder axis passes through.
    A point on a degenerate set (circle center, torus axis or core circle) maps
    to the chart point with u=0 on the affected coordinates and is flagged. J=0 there,
    except that a cylinder axis keeps its unit derivative.
    """
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (atlas.embed_dim,):
        raise ShapeError(f"expected a point in R^{atlas.embed_dim}, got shape {w.shape}")
    chart = atlas.charts[0]

    if atlas.tag in ("circle", "product-of-circles", "cylinder-axis"):
        n_pairs = atlas.embed_dim // 2
        z = np.array(w)
        u = np.zeros(atlas.dim)
        jac = np.zeros((atlas.embed_dim, atlas.embed_dim))
        degenerate = False
        for i in range(n_pairs):
            block = slice(2 * i, 2 * i + 2)
            z[block], u[i], jac[block, block], flagged = _circle_block(w[block])
            degenerate = degenerate or flagged
        if atlas.tag == "cylinder-axis":
            u[-1] = w[-1]
            jac[-1, -1] = 1.0
        residual = float(np.linalg.norm(stationarity(chart, u, w)))
        return ProjectionResult(z, chart.chart_id, u, jac, residual, degenerate)

    if atlas.tag == "torus3d":
        R = atlas.params["R"]
        rho = float(np.hypot(w[0], w[1]))
        if rho < DEGENERATE_RADIUS:
            u = np.zeros(2)
            return ProjectionResult(chart.sigma(u), chart.chart_id, u, np.zeros((3, 3)), 0.0, True)
        u1 = float(np.mod(np.arctan2(w[1], w[0]), TWO_PI))
        if np.hypot(rho - R, w[2]) < DEGENERATE_RADIUS:
            u = np.array([u1, 0.0])
            return ProjectionResult(chart.sigma(u), chart.chart_id, u, np.zeros((3, 3)), 0.0, True)
        u = np.array([u1, float(np.mod(np.arctan2(w[2], rho - R), TWO_PI))])
        jac = projection_jacobian(u, chart.chart_id, w, atlas)
        residual = float(np.linalg.norm(stationarity(chart, u, w)))
        return ProjectionResult(chart.sigma(u), chart.chart_id, u, jac, residual)

    raise ProjectionError(f"no analytic projector for manifold '{atlas.tag}'", residual=float("inf"))


def newton_refine(chart: Chart, u0: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, float, bool]:
    """
    Newton iterations on G(u, w) = 0 from u0.

    The step is halved while it increases the residual.

    Returns:
        (u, residual, converged)
    """
    u = np.array(u0, dtype=np.float64)
    sigma, d, dd = chart.evaluate(u)
    g = d.T @ (sigma - w)
    residual = float(np.linalg.norm(g))
    for iteration in range(NEWTON_MAX_ITER):
        if residual < NEWTON_TOL:
            return u, residual, True
        try:
            step = np.linalg.solve(_stationarity_jacobian(sigma, d, dd, w), g)
        except np.linalg.LinAlgError:
            return u, residual, False
        scale = 1.0
        for _ in range(40):
            candidate = u - scale * step
            sigma_c, d_c, dd_c = chart.evaluate(candidate)
            g_c = d_c.T @ (sigma_c - w)
            residual_c = float(np.linalg.norm(g_c))
            if residual_c <= residual:
                break
            scale *= 0.5
        if scale < 1.0:
            logger.debug("Newton step damped to %.3g at iteration %d", scale, iteration)
        u, sigma, d, dd, g, residual = candidate, sigma_c, d_c, dd_c, g_c, residual_c
    return u, residual, residual < NEWTON_TOL


def project_chart(w, atlas: ManifoldAtlas, n_candidates: int = 8) -> ProjectionResult:
    """
    Nearest point through charts: seed from the point cloud, refine by Newton.

    Each chart among the nearest seeds is refined from its closest seed. When
    several charts converge the smaller ||w - sigma(u*)|| wins, then the lower
    chart id.

    Raises:
        ProjectionError: No seed cloud, or Newton did not converge in any chart
        SingularJacobianError: The converged point has a singular dG/du
    """
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (atlas.embed_dim,):
        raise ShapeError(f"expected a point in R^{atlas.embed_dim}, got shape {w.shape}")
    cloud = atlas.point_cloud
    if cloud is None:
        raise ProjectionError(f"manifold '{atlas.tag}' has no point-cloud seed", residual=float("inf"))

    seeds: dict[int, int] = {}
    for index in cloud.nearest(w, n_candidates):
        seeds.setdefault(int(cloud.chart_ids[index]), int(index))

    best: Optional[tuple[float, int, np.ndarray, float]] = None
    worst_residual = 0.0
    for chart_id in sorted(seeds):
        chart = atlas.chart(chart_id)
        u, residual, converged = newton_refine(chart, cloud.coords[seeds[chart_id]], w)
        if not converged:
            worst_residual = max(worst_residual, residual)
            continue
        u = chart.normalize(u)
        distance = float(np.linalg.norm(w - chart.sigma(u)))
        if best is None or distance < best[0]:
            best = (distance, chart_id, u, residual)

    if best is None:
        raise ProjectionError(
            f"Newton projection did not converge (residual {worst_residual:.3e})", residual=worst_residual
        )
    _, chart_id, u, residual = best
    chart = atlas.chart(chart_id)
    jac = projection_jacobian(u, chart_id, w, atlas)
    return ProjectionResult(chart.sigma(u), chart_id, u, jac, residual)


def project(w, atlas: ManifoldAtlas) -> ProjectionResult:
    """Analytic projector when the tag has one, chart projection otherwise."""
    if atlas.analytic:
        return project_analytic(w, atlas)
    return project_chart(w, atlas)


def constraint_residual(z, atlas: ManifoldAtlas) -> float:
    """How far z sits off the manifold (0 on M)."""
    z = np.asarray(z, dtype=np.float64)
    if atlas.tag in ("circle", "product-of-circles", "cylinder-axis"):
        pairs = z[: 2 * (atlas.embed_dim // 2)].reshape(-1, 2)
        return float(np.max(np.abs(np.linalg.norm(pairs, axis=1) - 1.0)))
    if atlas.tag == "torus3d":
        R, r = atlas.params["R"], atlas.params["r"]
        return float(abs(np.hypot(np.hypot(z[0], z[1]) - R, z[2]) - r))
    return float(np.linalg.norm(z - project(z, atlas).z))


def project_batch(w: np.ndarray, atlas: ManifoldAtlas) -> tuple[np.ndarray, np.ndarray, int]:
    """
    Project each row of a (B, N) batch.

    Returns:
        (Z (B, N), Jacobians (B, N, N), number of degenerate rows)
    """
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 2 or w.shape[1] != atlas.embed_dim:
        raise ShapeError(f"expected a (B, {atlas.embed_dim}) batch, got shape {w.shape}")
    z = np.empty_like(w)
    jac = np.empty((w.shape[0], atlas.embed_dim, atlas.embed_dim))
    degenerate = 0
    for i, row in enumerate(w):
        result = project(row, atlas)
        z[i], jac[i] = result.z, result.jacobian
        degenerate += int(result.degenerate)
    if degenerate:
        logger.warning("%d of %d latent codes hit a degenerate projection", degenerate, w.shape[0])
    return z, jac, degenerate


def projection_layer(w: Operand, atlas: ManifoldAtlas) -> Tensor:
    """Differentiable Lambda(w) on a (B, N) batch; gradients flow through the IFT Jacobian."""

    def forward(value: np.ndarray):
        z, jac, _ = project_batch(value, atlas)
        return z, jac

    def jacobian_apply(jac: np.ndarray, upstream: np.ndarray) -> np.ndarray:
        return np.einsum("bi,bij->bj", upstream, jac)

    return custom_gradient_node(w, forward, jacobian_apply, name=f"project[{atlas.tag}]")


def estimate_lipschitz(
    atlas: ManifoldAtlas,
    rng: np.random.Generator,
    n_pairs: int = 200,
    spread: float = 0.3,
    separation: float = 1e-3,
) -> float:
    """
    Empirical constant C with ||Lambda(w1) - Lambda(w2)|| <= C ||w1 - w2||.

    Pairs are drawn near the manifold (seed point plus Gaussian offset of
    std ``spread``) at distance ``separation`` from each other. Degenerate
    pairs are skipped.
    """
    chart = atlas.charts[0]
    lower, upper = np.array(chart.lower), np.array(chart.upper)
    worst = 0.0
    for _ in range(n_pairs):
        base = chart.sigma(rng.uniform(lower, upper)) + spread * rng.standard_normal(atlas.embed_dim)
        direction = rng.standard_normal(atlas.embed_dim)
        other = base + separation * direction / np.linalg.norm(direction)
        try:
            first, second = project(base, atlas), project(other, atlas)
        except ProjectionError:
            continue
        if first.degenerate or second.degenerate:
            continue
        worst = max(worst, float(np.linalg.norm(first.z - second.z) / np.linalg.norm(base - other)))
    logger.info("Estimated projection Lipschitz constant for %s: %.4f", atlas.tag, worst)
    return worst
