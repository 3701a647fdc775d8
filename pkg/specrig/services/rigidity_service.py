#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/11 10:30
# @Author : Ray
# @File : rigidity_service.py
# @Software: PyCharm
"""
谱刚性验证：检查联合谱假设，并逐步重建对角酉见证 Λ̃，失败时给出结构化诊断。

重建步骤:
  diagonalize       A1 在特征基下与参照 H 的对角元逐一匹配（数值重合的簇内按 A2 的乘积细化）
  adjoint_products  A2A2*, A2*A2, A3A3*, A3*A3 在该基下等于参照
  a2_support        A2 只在超对角线上有非零元，且模长正确
  phases            由 A2 超对角线的相位递推 Λ̃，并与 A3 的次对角线核对
  compressions      (sl2) 谱压缩 (A2A3)_jj = μ_j
  hs_budget         (sl2) ‖A3‖²_HS = n−1 迫使其余元素为零
  certify           ‖A_i − W ref_i W*‖ 在容差内
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from specrig.errors.exceptions import (
    ConstraintViolationError,
    DimensionMismatchError,
    IndexConstraintError,
    LineNotInSpectrumError,
    MultiplicityError,
    NotUnitaryError,
)
from specrig.services.config_loader import resolve_tol
from specrig.services.generators import (
    GeneratorTuple,
    c_coeff,
    check_nu,
    counterexample_tuple,
    sl2_generators,
    snu2_generators,
    structural_matrices,
)
from specrig.services.matrix_core import (
    ComplexMatrix,
    as_matrix,
    cluster_values,
    hermitian_eig,
    hs_norm,
    is_normal,
    normal_eig,
    scale_of,
    spectral_projection,
)
from specrig.services.polynomial import LinearForm, divide_linear, poly_equal
from specrig.services.spectrum_service import (
    det_pencil,
    det_pencil_homogeneous,
    spectra_equal,
    x2_dependence,
)
from specrig.utils.logger import logger

SNU2_PENCILS = ("A1, A2 A2^H", "A1, A2^H A2", "A1, A3 A3^H", "A1, A3^H A3", "A1, A2 A3")
SL2_PENCILS = ("A1, A2 A2^H", "A1, A2^H A2", "A1, A3 A3^H", "A1, A2 A3")
# 诊断中最多列出的元素个数
_MAX_ENTRIES = 8
# 细化簇内基时 A2*A2 的权重
_REFINE_WEIGHT = math.sqrt(2.0) - 1.0


class Verdict(str, Enum):
    EQUIVALENT = "equivalent"
    HYPOTHESIS_FAILED = "hypothesis_failed"
    RECONSTRUCTION_FAILED = "reconstruction_failed"


VERDICT_EXIT_CODES = {
    Verdict.EQUIVALENT: 0,
    Verdict.HYPOTHESIS_FAILED: 2,
    Verdict.RECONSTRUCTION_FAILED: 3,
}


@dataclass
class Diagnostic:
    step: str
    code: str
    message: str
    entries: list[tuple[int, int, float]] = field(default_factory=list)


@dataclass
class RigidityReport:
    """
    witness 是首元为1的对角酉矩阵 Λ̃，basis 是把 A1 对角化并按参照排序的酉矩阵；
    全局见证 W = basis·Λ̃ 满足 A_i ≈ W ref_i W*。
    """
    verdict: Verdict
    family: str
    n: int
    nu: float | None
    witness: ComplexMatrix | None = None
    basis: ComplexMatrix | None = None
    residual: float | None = None
    condition_residuals: dict[str, float] = field(default_factory=dict)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def global_witness(self) -> ComplexMatrix | None:
        if self.witness is None:
            return None
        return self.basis @ self.witness

    @property
    def exit_code(self) -> int:
        return VERDICT_EXIT_CODES[self.verdict]

    def failed_steps(self) -> list[str]:
        return list(dict.fromkeys(d.step for d in self.diagnostics))


class ConditionCheck(NamedTuple):
    a1_normal: bool
    results: dict[str, bool]
    residuals: dict[str, float]

    @property
    def all_ok(self) -> bool:
        return self.a1_normal and all(self.results.values())


class CounterexampleReport(NamedTuple):
    params: tuple[complex, complex, complex, complex]
    three_pencil_equal: bool
    three_pencil_diff: float
    commutator: ComplexMatrix
    commutator_residual: float
    sl2_report: RigidityReport


def _as_triple(mats: Sequence, n: int) -> list[ComplexMatrix]:
    if isinstance(mats, GeneratorTuple):
        mats = mats.matrices()
    mats = [as_matrix(m) for m in mats]
    if len(mats) != 3:
        raise DimensionMismatchError(f"需要三个矩阵 (A1, A2, A3)，实际 {len(mats)} 个。")
    if any(m.shape[0] != n for m in mats):
        raise DimensionMismatchError(f"矩阵维数 {[m.shape[0] for m in mats]} 与 n={n} 不符。")
    return mats


def _largest_entries(m: np.ndarray, mask: np.ndarray, threshold: float) -> list[tuple[int, int, float]]:
    magnitudes = np.where(mask, np.abs(m), 0.0)
    idx = np.argwhere(magnitudes > threshold)
    found = sorted(((int(i), int(j), float(magnitudes[i, j])) for i, j in idx), key=lambda e: -e[2])
    return found[:_MAX_ENTRIES]


def _verify(mats: Sequence, ref: GeneratorTuple, pencils: Sequence[str], tol: float) -> ConditionCheck:
    mats = _as_triple(mats, ref.n)
    if not is_normal(mats[0], tol):
        logger.info("A1 不是正规矩阵，假设不成立")
        return ConditionCheck(False, {}, {})
    comparisons = spectra_equal(mats, ref.matrices(), ";".join(pencils), tol)
    return ConditionCheck(True, {c.label: c.equal for c in comparisons},
                          {c.label: c.max_diff for c in comparisons})


def verify_conditions_snu2(mats: Sequence, n: int, nu: float, tol: float | None = None) -> ConditionCheck:
    """五个束 (A1,A2A2*), (A1,A2*A2), (A1,A3A3*), (A1,A3*A3), (A1,A2A3) 与 S_νU(2) 参照逐一比较"""
    return _verify(mats, snu2_generators(n, nu), SNU2_PENCILS, resolve_tol(tol))


def verify_conditions_sl2(mats: Sequence, n: int, tol: float | None = None) -> ConditionCheck:
    return _verify(mats, sl2_generators(n), SL2_PENCILS, resolve_tol(tol))


def certify_equivalence(mats: Sequence, ref: GeneratorTuple, w, tol: float | None = None) -> float:
    """max_i ‖A_i − W ref_i W*‖_HS"""
    tol = resolve_tol(tol)
    mats = _as_triple(mats, ref.n)
    w = as_matrix(w)
    if w.shape[0] != ref.n:
        raise DimensionMismatchError(f"见证矩阵维数 {w.shape[0]} 与 n={ref.n} 不符。")
    unitarity = hs_norm(w @ w.conj().T - np.eye(ref.n))
    if unitarity > tol * ref.n:
        raise NotUnitaryError(f"见证矩阵不是酉矩阵: ‖WW*−I‖ = {unitarity:.3e}")
    wh = w.conj().T
    return max(hs_norm(a - w @ r @ wh) for a, r in zip(mats, ref.matrices()))


def compression_check(a1, b, lam, mu, tol: float | None = None, check_line: bool = True) -> bool:
    """
    谱压缩: 若直线 λx_1 + μx_2 = 1 是 det(x_1 a1 + x_2 b − I) 的单重因子，则 P_λ b P_λ = μ P_λ。
    check_line=False 时跳过直线条件，只比较压缩；例如 a1 = diag(1,2)、b = [[5,1],[1,7]]、λ=1、μ=5
    只在 check_line=False 时成立，默认会因直线 x1 + 5·x2 = 1 不在联合谱中抛出 LineNotInSpectrumError。
    """
    tol = resolve_tol(tol)
    a1, b = as_matrix(a1), as_matrix(b)
    if check_line:
        p = det_pencil([a1, b], ["x1", "x2"])
        line = LinearForm.line((lam, mu))
        threshold = tol * max(1.0, p.max_coeff())
        quotient, remainder = divide_linear(p, line)
        if remainder.max_coeff() > threshold:
            raise LineNotInSpectrumError(f"直线 {lam}·x1 + {mu}·x2 = 1 不在联合谱中。")
        _, second = divide_linear(quotient, line)
        if second.max_coeff() <= threshold:
            raise MultiplicityError(f"直线 {lam}·x1 + {mu}·x2 = 1 的重数大于1。")
    proj = spectral_projection(a1, lam, tol)
    residual = hs_norm(proj @ b @ proj - complex(mu) * proj)
    return residual <= tol * scale_of(b)


def _refine_cluster(vectors: ComplexMatrix, a2: ComplexMatrix, tol: float) -> ComplexMatrix:
    """在 A1 的近简并特征子空间内对角化 A2A2* + κ·A2*A2 的压缩（两者在假设下与 A1 可交换）"""
    a2h = a2.conj().T
    compressed = vectors.conj().T @ (a2 @ a2h + _REFINE_WEIGHT * (a2h @ a2)) @ vectors
    return vectors @ hermitian_eig(0.5 * (compressed + compressed.conj().T), tol).vectors


def _ordered_basis(a1: ComplexMatrix, a2: ComplexMatrix, ref: GeneratorTuple, tol: float,
                   diagnostics: list[Diagnostic]) -> ComplexMatrix | None:
    """
    A1 的特征向量按参照 H 对角元的次序排列（排序后贪心匹配）。
    数值上重合的特征值簇内，再按 A2A2* + κ·A2*A2 的特征值与参照匹配。
    """
    decomposition = normal_eig(a1, tol)
    target = np.real(np.diag(ref.H))
    e = ref.E
    target_products = np.real(np.diag(e @ e.conj().T) + _REFINE_WEIGHT * np.diag(e.conj().T @ e))
    order = np.argsort(target, kind="stable")
    threshold = tol * scale_of(a1)
    basis = np.zeros_like(decomposition.vectors)
    mismatches = []
    for group in cluster_values(decomposition.values, tol, hs_norm(a1)):
        ref_group = order[group]
        vectors = decomposition.vectors[:, group]
        if len(group) > 1:
            vectors = _refine_cluster(vectors, a2, tol)
            ref_group = ref_group[np.argsort(target_products[ref_group], kind="stable")]
            logger.debug(f"A1 的特征值簇 {list(map(int, ref_group))} 按 A2 的乘积细化")
        for ev_idx, ref_idx, column in zip(group, ref_group, range(len(group))):
            basis[:, ref_idx] = vectors[:, column]
            gap = abs(decomposition.values[ev_idx] - target[ref_idx])
            if gap > threshold:
                mismatches.append((int(ref_idx), int(ref_idx), float(gap)))
    if mismatches:
        diagnostics.append(Diagnostic("diagonalize", "spectrum_mismatch",
                                      "A1 的特征值与参照 H 的对角元不匹配", mismatches[:_MAX_ENTRIES]))
        return None
    return basis


def _check_adjoint_products(rotated: list[ComplexMatrix], ref: GeneratorTuple, tol: float,
                            diagnostics: list[Diagnostic]) -> None:
    _, a2, a3 = rotated
    _, e, f = ref.matrices()
    products = {
        "A2 A2^H": (a2 @ a2.conj().T, e @ e.conj().T),
        "A2^H A2": (a2.conj().T @ a2, e.conj().T @ e),
        "A3 A3^H": (a3 @ a3.conj().T, f @ f.conj().T),
        "A3^H A3": (a3.conj().T @ a3, f.conj().T @ f),
    }
    for name, (got, want) in products.items():
        threshold = tol * scale_of(want)
        if hs_norm(got - want) > threshold:
            entries = _largest_entries(got - want, np.ones(got.shape, dtype=bool), threshold)
            diagnostics.append(Diagnostic("adjoint_products", "product_mismatch",
                                          f"{name} 在A1特征基下与参照不符", entries))


def _check_a2_support(rotated: list[ComplexMatrix], ref: GeneratorTuple, tol: float,
                      diagnostics: list[Diagnostic]) -> None:
    a1, a2, _ = rotated
    n = ref.n
    threshold = tol * scale_of(a2)
    superdiag = np.eye(n, k=1, dtype=bool)
    off = _largest_entries(a2, ~superdiag, threshold)
    if off:
        diagnostics.append(Diagnostic("a2_support", "off_superdiagonal",
                                      f"A2 在超对角线以外有非零元 (i,j)={off[0][:2]}", off))
        if x2_dependence(a1, a2):
            diagnostics.append(Diagnostic("a2_support", "x2_dependence",
                                          "det(x1 A1 + x2 A2 − I) 含有 x2 的正次幂"))
    moduli = [(k - 1, k, float(abs(abs(a2[k - 1, k]) - abs(ref.E[k - 1, k])))) for k in range(1, n)]
    wrong = [entry for entry in moduli if entry[2] > threshold]
    if wrong:
        diagnostics.append(Diagnostic("a2_support", "modulus_mismatch",
                                      "A2 超对角元的模与参照不符", wrong[:_MAX_ENTRIES]))


def _phase_witness(a2: ComplexMatrix, ref: GeneratorTuple) -> np.ndarray:
    """Λ̃_0 = 1, Λ̃_k = conj(r_k)·Λ̃_{k−1}，r_k 为 A2 与参照超对角元之比的相位"""
    n = ref.n
    lam = np.ones(n, dtype=np.complex128)
    for k in range(1, n):
        ratio = a2[k - 1, k] / ref.E[k - 1, k]
        lam[k] = np.conj(ratio / abs(ratio)) * lam[k - 1]
    return lam


def _check_a3_subdiagonal(a3: ComplexMatrix, expected: ComplexMatrix, tol: float, step: str,
                          diagnostics: list[Diagnostic]) -> None:
    n = a3.shape[0]
    threshold = tol * scale_of(a3)
    diff = a3 - expected
    wrong = _largest_entries(diff, np.eye(n, k=-1, dtype=bool), threshold)
    if wrong:
        diagnostics.append(Diagnostic(step, "phase_mismatch", "A3 次对角线的相位与由 A2 读出的 Λ 不一致", wrong))


def _check_sl2_a3(rotated: list[ComplexMatrix], ref: GeneratorTuple, lam: np.ndarray, tol: float,
                  diagnostics: list[Diagnostic]) -> None:
    _, a2, a3 = rotated
    n = ref.n
    mu = np.diag(ref.E @ ref.F)
    got = np.diag(a2 @ a3)
    threshold = tol * scale_of(a2 @ a3)
    wrong = [(j, j, float(abs(got[j] - mu[j]))) for j in range(n) if abs(got[j] - mu[j]) > threshold]
    if wrong:
        diagnostics.append(Diagnostic("compressions", "compression_mismatch",
                                      "谱压缩 (A2A3)_jj 与 (j+1)(n−1−j) 不符", wrong[:_MAX_ENTRIES]))
        return

    expected = np.diag(lam) @ ref.F @ np.diag(lam).conj().T
    _check_a3_subdiagonal(a3, expected, tol, "compressions", diagnostics)

    budget = hs_norm(a3) ** 2
    if abs(budget - (n - 1)) > tol * max(1.0, n - 1.0):
        diagnostics.append(Diagnostic("hs_budget", "hs_budget_violation",
                                      f"‖A3‖²_HS = {budget:.12g}，应为 {n - 1}"))
    off = _largest_entries(a3, ~np.eye(n, k=-1, dtype=bool), tol * scale_of(a3))
    if off:
        diagnostics.append(Diagnostic("hs_budget", "off_subdiagonal", "A3 在次对角线以外有非零元", off))


def _reconstruct(mats: Sequence, ref: GeneratorTuple, tol: float, assume_hypotheses: bool,
                 pencils: Sequence[str], sl2_mode: bool) -> RigidityReport:
    mats = _as_triple(mats, ref.n)
    report = RigidityReport(Verdict.EQUIVALENT, ref.family.value, ref.n, ref.nu)
    a1 = mats[0]

    if not is_normal(a1, tol):
        report.verdict = Verdict.HYPOTHESIS_FAILED
        report.diagnostics.append(Diagnostic("hypotheses", "a1_not_normal", "A1 不是正规矩阵"))
        return report
    if not assume_hypotheses:
        check = _verify(mats, ref, pencils, tol)
        report.condition_residuals = check.residuals
        failed = [label for label, ok in check.results.items() if not ok]
        if failed:
            report.verdict = Verdict.HYPOTHESIS_FAILED
            report.diagnostics.extend(
                Diagnostic("hypotheses", "pencil_mismatch", f"束 {label} 的联合谱与参照不同") for label in failed)
            logger.info(f"假设不成立: {failed}")
            return report

    diagnostics = report.diagnostics
    basis = _ordered_basis(a1, mats[1], ref, tol, diagnostics)
    if basis is None:
        report.verdict = Verdict.RECONSTRUCTION_FAILED
        return report
    rotated = [basis.conj().T @ m @ basis for m in mats]

    _check_adjoint_products(rotated, ref, tol, diagnostics)
    _check_a2_support(rotated, ref, tol, diagnostics)
    if diagnostics:
        report.verdict = Verdict.RECONSTRUCTION_FAILED
        logger.info(f"重建失败于步骤 {report.failed_steps()}")
        return report

    lam = _phase_witness(rotated[1], ref)
    if sl2_mode:
        _check_sl2_a3(rotated, ref, lam, tol, diagnostics)
    else:
        expected = np.diag(lam) @ ref.F @ np.diag(lam).conj().T
        _check_a3_subdiagonal(rotated[2], expected, tol, "phases", diagnostics)
    if diagnostics:
        report.verdict = Verdict.RECONSTRUCTION_FAILED
        logger.info(f"重建失败于步骤 {report.failed_steps()}")
        return report

    witness = np.diag(lam)
    residual = certify_equivalence(mats, ref, basis @ witness, tol)
    threshold = tol * max(scale_of(m) for m in mats)
    report.residual = residual
    if residual > threshold:
        report.verdict = Verdict.RECONSTRUCTION_FAILED
        diagnostics.append(Diagnostic("certify", "residual_too_large",
                                      f"认证残差 {residual:.3e} 超过阈值 {threshold:.3e}"))
        return report

    report.witness, report.basis = witness, basis
    logger.info(f"{ref.family.value} n={ref.n}: 酉等价成立, 认证残差 {residual:.3e}")
    return report


def reconstruct_snu2(mats: Sequence, n: int, nu: float, tol: float | None = None,
                     assume_hypotheses: bool = False) -> RigidityReport:
    """
    检查 S_νU(2) 的五个束假设并重建见证；assume_hypotheses=True 时跳过束比较，
    只运行结构性步骤。
    """
    return _reconstruct(mats, snu2_generators(n, nu), resolve_tol(tol), assume_hypotheses, SNU2_PENCILS, False)


def reconstruct_sl2(mats: Sequence, n: int, tol: float | None = None,
                    assume_hypotheses: bool = False) -> RigidityReport:
    return _reconstruct(mats, sl2_generators(n), resolve_tol(tol), assume_hypotheses, SL2_PENCILS, True)


def exchange_tuple(n: int, nu: float, pairs: Sequence[tuple[int, int]],
                   phases: Sequence[float] | None = None, tol: float | None = None
                   ) -> tuple[ComplexMatrix, ComplexMatrix]:
    """
    A2 = D̃·Λ·(∏ Q_{i−1,j−1})·𝒫，其中 D̃ = diag(νc_1, …, νc_{n−1}, 0)。
    对 c_i² = c_j² 的下标对，(A1, A2A2*) 与 (A1, A2*A2) 的谱与参照相同，
    但 det(x1 A1 + x2 A2 − I) 依赖于 x2。
    """
    tol = resolve_tol(tol)
    nu = check_nu(nu)
    ref = snu2_generators(n, nu)
    used: set[int] = set()
    q_total = np.eye(n, dtype=np.complex128)
    perm = None
    for i, j in pairs:
        if not 1 <= i < j <= n - 1:
            raise IndexConstraintError(f"交换下标需要 1 ≤ i < j ≤ n−1，实际 ({i}, {j})。")
        if {i, j} & used:
            raise IndexConstraintError(f"交换下标对 ({i}, {j}) 与之前的下标重叠。")
        used |= {i, j}
        ci, cj = c_coeff(n, i, nu) ** 2, c_coeff(n, j, nu) ** 2
        if abs(ci - cj) > tol * max(1.0, ci, cj):
            raise ConstraintViolationError(f"c_{i}² = {ci} 与 c_{j}² = {cj} 不相等，ν 不在对应的例外点上。")
        perm, q = structural_matrices(n, i - 1, j - 1)
        q_total = q_total @ q
    if perm is None:
        perm, _ = structural_matrices(n, 0, 1)

    d_tilde = np.diag([nu * c_coeff(n, k, nu) for k in range(1, n + 1)])
    angles = np.zeros(n) if phases is None else np.asarray(phases, dtype=float)
    if angles.shape != (n,):
        raise DimensionMismatchError(f"相位个数 {angles.shape} 与 n={n} 不符。")
    lam = np.diag(np.exp(1j * angles))
    return ref.H.copy(), d_tilde @ lam @ q_total @ perm


def counterexample_demo(alpha=1.0, beta=2.0, gamma=2.0, delta=1.0, tol: float | None = None) -> CounterexampleReport:
    """
    三矩阵束的联合谱与 (H3, E3, F3) 相同，但 [A2, A3] ≠ A1，且 sl2 刚性假设不成立。
    """
    tol = resolve_tol(tol)
    t = counterexample_tuple(alpha, beta, gamma, delta)
    ref = sl2_generators(3)
    names = ["x", "y", "z"]
    p = det_pencil_homogeneous(t.matrices(), names, "t")
    q = det_pencil_homogeneous(ref.matrices(), names, "t")
    keys = set(p.terms) | set(q.terms)
    diff = max((abs(p.coeff(e) - q.coeff(e)) for e in keys), default=0.0)
    commutator = t.E @ t.F - t.F @ t.E
    report = reconstruct_sl2(t.matrices(), 3, tol)
    params = tuple(complex(v) for v in (alpha, beta, gamma, delta))
    logger.info(f"反例 {params}: 三矩阵谱相同={poly_equal(p, q, tol)}, 刚性判定={report.verdict.value}")
    return CounterexampleReport(params, poly_equal(p, q, tol), diff, commutator,
                                hs_norm(commutator - t.H), report)


def phases_of(witness: ComplexMatrix) -> list[float]:
    """对角见证的相位角（弧度）"""
    return [math.atan2(z.imag, z.real) for z in np.diag(witness)]
