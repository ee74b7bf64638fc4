"""
验证套件服务
每个套件在随机实例或固定实例上把闭式公式与暴力枚举参照逐项比较，
汇总为 VerifyReport。精确套件在有理数上做零容差比较。
"""
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import get_settings
from app.core.exceptions import EngineError, InputError
from app.core.logging import computation_logger, error_logger
from app.models.schemas import SchurVerifyRow, VerifyReport
from app.services.abstract_points import (
    act_on_witness,
    correlation_transform,
    flip_kernel,
    four_factor_candidates,
    four_factor_kernel,
    gl2_act,
    point_from_kernel,
    projectively_equal,
    tensor_point_from_table,
)
from app.services.eynard_mehta import (
    config_mask,
    em_embed_L,
    em_enumerate,
    em_kernel,
    em_partition,
    em_weight,
    level_configs,
    pf_em_embed_L,
    pf_em_enumerate,
    pf_em_kernel,
    pf_em_partition,
    pf_em_weight,
)
from app.services.point_process import (
    Config,
    brute_force_correlations,
    kernel_correlation,
    lensemble_kernel,
    lensemble_prob,
    lensemble_table,
    pf_lensemble_kernel,
    pf_lensemble_prob,
    pf_lensemble_table,
    subsets_up_to,
)
from app.services.schur_process import (
    SchurSpec,
    SpacePoint,
    assemble_kernel,
    bridge_index,
    brute_correlations,
    em_bridge_spec,
    epsilon_toeplitz,
    pf_kernel_entry,
    schur_kernel,
    sequence_mass,
    toeplitz_W,
    toeplitz_chain_entry,
)
from app.services.symfunc import (
    H_eval,
    SeriesTruncation,
    Specialization,
    cauchy_H,
    cauchy_series,
    cauchy_tail_bound,
    h_o,
    h_o_series,
    h_o_tail_bound,
    partitions_up_to,
    skew_schur,
    subpartitions,
    tableau_schur,
    tau_direct,
    tau_pf,
)
from app.utils.contour import ContourConfig, contour_integrate, laurent_coefficient
from app.utils.linalg import Scalar, det, inverse, is_skew, pfaffian, submatrix
from app.utils.random_instances import (
    random_em_spec,
    random_invertible_skew,
    random_level_sizes,
    random_four_factor_point,
    random_lensemble,
    random_pf_em_spec,
    random_pf_lensemble,
    random_specialization,
    random_table,
    random_witness,
)

settings = get_settings()

# 数值套件在未给出容差时使用的默认容差
SCHUR_KERNEL_TOL = 1e-6
PF_SCHUR_KERNEL_TOL = 1e-5
RESIDUE_TOL = 1e-8
SYMBOL_TOL = 1e-10
SKEW_TOL = 1e-9
FOUR_FACTOR_FLOAT_TOL = 1e-10
BRIDGE_TOL = 1e-6


def deviation(actual: Scalar, expected: Scalar) -> float:
    """有理数给出精确差的模长，其余按复数模长"""
    if isinstance(actual, Rational) and isinstance(expected, Rational):
        return float(abs(Fraction(actual) - Fraction(expected)))
    return abs(complex(actual) - complex(expected))


@dataclass
class Tally:
    """套件内的逐项比较记录"""

    suite: str
    tolerance: float
    cases: int = 0
    max_deviation: float = 0.0
    max_tail: Optional[float] = None
    failures: List[str] = field(default_factory=list)

    def check(
        self,
        label: str,
        actual: Scalar,
        expected: Scalar,
        tail: float = 0.0,
        limit: Optional[float] = None,
    ) -> bool:
        """limit 收紧单项容差：实际使用 min(套件容差, limit)"""
        dev = deviation(actual, expected)
        self.max_deviation = max(self.max_deviation, dev)
        if tail:
            self.max_tail = max(self.max_tail or 0.0, tail)
        tolerance = self.tolerance if limit is None else min(self.tolerance, limit)
        ok = dev <= tolerance + tail
        if not ok:
            self.failures.append(f"{label}: 实际 {actual}, 期望 {expected}, 偏差 {dev:.3e}")
        return ok

    def require(self, label: str, condition: bool) -> bool:
        if not condition:
            self.failures.append(label)
        return condition

    def report(self) -> VerifyReport:
        return VerifyReport(
            suite=self.suite,
            cases=self.cases,
            max_deviation=self.max_deviation,
            tail_bound=self.max_tail,
            tolerance=self.tolerance,
            passed=not self.failures,
            failures=self.failures[:20],
        )


def _single_variable_spec(rng: np.random.Generator, T: int, pfaffian_mode: bool) -> SchurSpec:
    """变量取值不超过 1/2 的单变量特殊化链"""

    def one() -> Specialization:
        return Specialization((Fraction(1, int(rng.integers(2, 6))),))

    return SchurSpec(T, tuple(one() for _ in range(T)), tuple(one() for _ in range(T)), pfaffian_mode)


def complementary_pfaffian_deviation(A: np.ndarray) -> Scalar:
    """pf A_α = (−1)^{α₁+⋯+α₂ₘ} pf B_{ᾱ} / pf B（B = A⁻¹，下标从1计数）的最大偏差"""
    dim = A.shape[0]
    B = inverse(A, "A")
    pf_B = pfaffian(B)
    worst = Fraction(0)
    for size in range(0, dim + 1, 2):
        for alpha in combinations(range(dim), size):
            rest = [i for i in range(dim) if i not in alpha]
            sign = -1 if sum(i + 1 for i in alpha) % 2 else 1
            lhs = pfaffian(submatrix(A, alpha, alpha))
            rhs = sign * pfaffian(submatrix(B, rest, rest)) / pf_B
            worst = max(worst, abs(lhs - rhs))
    return worst


class VerificationService:
    """验证服务：套件注册表与运行入口"""

    def __init__(self):
        self.suites: Dict[str, Callable[..., VerifyReport]] = {
            "lensemble": self.verify_lensemble,
            "pf-lensemble": self.verify_pf_lensemble,
            "eynard-mehta": self.verify_eynard_mehta,
            "pf-eynard-mehta": self.verify_pf_eynard_mehta,
            "symfunc": self.verify_symfunc,
            "partition-functions": self.verify_partition_functions,
            "schur-kernel": self.verify_schur_kernel,
            "pf-schur-kernel": self.verify_pf_schur_kernel,
            "contour": self.verify_contour,
            "abstract-points": self.verify_abstract_points,
            "em-bridge": self.verify_em_bridge,
        }

    def run(self, name: str, tol: Optional[float] = None, seed: int = 0) -> VerifyReport:
        """运行单个套件；引擎异常记为失败而不是向外抛出"""
        if name not in self.suites:
            raise InputError(f"未知的验证套件: {name}（可选: {', '.join(self.suites)}）")
        start = time.perf_counter()
        try:
            report = self.suites[name](tol, seed)
        except EngineError as exc:
            error_logger.log_numeric_error(f"verify:{name}", exc)
            report = VerifyReport(
                suite=name, passed=False, failures=[f"{type(exc).__name__}: {exc}"]
            )
        computation_logger.log_suite(name, report.cases, report.max_deviation, report.passed)
        computation_logger.debug("Suite timing", suite=name, elapsed=time.perf_counter() - start)
        return report

    def run_all(self, tol: Optional[float] = None, seed: int = 0) -> List[VerifyReport]:
        return [self.run(name, tol, seed) for name in self.suites]

    # ------------------------------------------------------------ 有限集点过程

    def verify_lensemble(self, tol: Optional[float], seed: int, cases: int = 50) -> VerifyReport:
        """随机条件L-系综：det K_Y 与枚举关联函数逐项相等"""
        rng = np.random.default_rng(seed)
        tally = Tally("lensemble", tol or 0.0)
        for case in range(cases):
            E = random_lensemble(rng, int(rng.integers(1, 7)))
            table = lensemble_table(E)
            tally.check(f"case {case} 总概率", table.total(), Fraction(1))
            rho = brute_force_correlations(table)
            K = lensemble_kernel(E)
            for Y, value in rho.items():
                tally.check(f"case {case} Y={Y}", kernel_correlation(K, Y), value)
            if E.window.count == E.ground.size:
                L = E.L
                alt = L @ inverse(E.shifted())
                for (a, b), x in np.ndenumerate(K.K):
                    tally.check(f"case {case} L(I+L)⁻¹[{a},{b}]", x, alt[a, b])
            tally.cases += 1
        return tally.report()

    def verify_pf_lensemble(self, tol: Optional[float], seed: int, cases: int = 50) -> VerifyReport:
        """随机Pfaffian L-系综的关联函数与互补Pfaffian子式恒等式"""
        rng = np.random.default_rng(seed)
        tally = Tally("pf-lensemble", tol or 0.0)
        for case in range(cases):
            E = random_pf_lensemble(rng, int(rng.integers(1, 5)))
            table = pf_lensemble_table(E)
            tally.check(f"case {case} 总概率", table.total(), Fraction(1))
            rho = brute_force_correlations(table)
            K = pf_lensemble_kernel(E)
            tally.require(f"case {case} 核不是反对称矩阵", is_skew(K.K))
            for Y, value in rho.items():
                tally.check(f"case {case} Y={Y}", kernel_correlation(K, Y), value)
            tally.cases += 1
        for case in range(cases):
            dim = 2 * int(rng.integers(1, 5))
            A = random_invertible_skew(rng, dim)
            tally.check(f"互补Pfaffian case {case}", complementary_pfaffian_deviation(A), Fraction(0))
            tally.cases += 1
        return tally.report()

    # ------------------------------------------------------------ 多层过程

    def verify_eynard_mehta(self, tol: Optional[float], seed: int, cases: int = 20) -> VerifyReport:
        """配分函数、核的子式与嵌入L-系综的条件概率"""
        rng = np.random.default_rng(seed)
        tally = Tally("eynard-mehta", tol or 0.0)
        for case in range(cases):
            k = int(rng.integers(1, 4))
            n = int(rng.integers(1, 3))
            spec = random_em_spec(rng, n, random_level_sizes(rng, k, n, 4))
            configs = list(level_configs(spec, n))
            total = sum((em_weight(spec, c) for c in configs), Fraction(0))
            tally.check(f"case {case} Σ权重 = det M", total, em_partition(spec))

            table = em_enumerate(spec)
            rho = brute_force_correlations(table)
            K = em_kernel(spec)
            for Y in subsets_up_to(K.ground, 4):
                tally.check(f"case {case} Y={Y}", kernel_correlation(K, Y), rho[Y])

            E = em_embed_L(spec)
            for c in configs:
                X = _embedded_config(spec.n, config_mask(spec, c))
                tally.check(
                    f"case {case} 嵌入概率 {c}", lensemble_prob(E, X), table.prob(config_mask(spec, c))
                )
            for Y in subsets_up_to(K.ground, 2):
                if Y.count and not _balanced(spec.sizes, Y, spec.n):
                    tally.check(
                        f"case {case} 层大小不等的构型 {Y}",
                        lensemble_prob(E, _embedded_config(spec.n, Y)),
                        Fraction(0),
                    )
            tally.cases += 1
        return tally.report()

    def verify_pf_eynard_mehta(self, tol: Optional[float], seed: int, cases: int = 20) -> VerifyReport:
        rng = np.random.default_rng(seed)
        tally = Tally("pf-eynard-mehta", tol or 0.0)
        for case in range(cases):
            k = int(rng.integers(1, 3))
            spec = random_pf_em_spec(rng, 1, random_level_sizes(rng, k, 2, 4))
            configs = list(level_configs(spec, 2))
            total = sum((pf_em_weight(spec, c) for c in configs), Fraction(0))
            tally.check(f"case {case} Σ权重 = pf N", total, pf_em_partition(spec))

            table = pf_em_enumerate(spec)
            rho = brute_force_correlations(table)
            K = pf_em_kernel(spec)
            tally.require(f"case {case} 核不是反对称矩阵", is_skew(K.K))
            for Y in subsets_up_to(K.ground, 3):
                tally.check(f"case {case} Y={Y}", kernel_correlation(K, Y), rho[Y])

            E = pf_em_embed_L(spec)
            for c in configs:
                X = _embedded_config(spec.n, config_mask(spec, c))
                tally.check(
                    f"case {case} 嵌入概率 {c}",
                    pf_lensemble_prob(E, X),
                    table.prob(config_mask(spec, c)),
                )
            tally.cases += 1
        return tally.report()

    # ------------------------------------------------------------ 对称函数

    def verify_symfunc(self, tol: Optional[float], seed: int) -> VerifyReport:
        rng = np.random.default_rng(seed)
        tally = Tally("symfunc", tol or 0.0)
        for case in range(3):
            rho = random_specialization(rng, int(rng.integers(1, 4)))
            for la in partitions_up_to(6):
                tally.check(f"τ {la} case {case}", tau_pf(la, rho), tau_direct(la, rho))
                for mu in subpartitions(la):
                    tally.check(
                        f"Jacobi-Trudi {la}/{mu} case {case}",
                        skew_schur(la, mu, rho),
                        tableau_schur(la, mu, rho),
                    )
                tally.cases += 1
        alpha = random_specialization(rng, 1)
        a = alpha.variables[0]
        for la in partitions_up_to(8):
            exponent = sum(la.part(2 * i - 1) - la.part(2 * i) for i in range(1, la.length + 1))
            tally.check(f"τ {la}(α)", tau_direct(la, alpha), a**exponent)
            tally.cases += 1

        degree = 10
        for case in range(3):
            r1 = _small_specialization(rng, 2)
            r2 = _small_specialization(rng, 2)
            bound = cauchy_tail_bound(r1, r2, degree)
            tally.check(
                f"Cauchy case {case}",
                cauchy_series(r1, r2, SeriesTruncation(degree)),
                cauchy_H(r1, r2),
                tail=bound,
            )
            r3 = _small_specialization(rng, 3)
            tally.check(
                f"H° case {case}",
                h_o_series(r3, SeriesTruncation(degree)),
                h_o(r3),
                tail=h_o_tail_bound(r3, degree),
            )
            tally.cases += 2
        return tally.report()

    def verify_partition_functions(self, tol: Optional[float], seed: int) -> VerifyReport:
        """截断枚举的权重和随截断次数单调逼近 Z 与 Z°，偏差不超过尾项上界"""
        rng = np.random.default_rng(seed)
        tally = Tally("partition-functions", tol or 0.0)
        for pfaffian_mode in (False, True):
            for case in range(2):
                spec = _single_variable_spec(rng, 2, pfaffian_mode)
                previous = None
                for cutoff in (8, 10, 12):
                    mass = sequence_mass(spec, cutoff)
                    gap = deviation(mass.enumerated, mass.partition_function)
                    tally.check(
                        f"{'Z°' if pfaffian_mode else 'Z'} case {case} cutoff {cutoff}",
                        mass.enumerated,
                        mass.partition_function,
                        tail=mass.tail_bound,
                    )
                    if previous is not None:
                        tally.require(
                            f"case {case} cutoff {cutoff} 未单调收敛: {gap} > {previous}",
                            gap <= previous,
                        )
                    previous = gap
                    tally.cases += 1
        return tally.report()

    # ------------------------------------------------------------ Schur过程核

    def verify_schur_kernel(
        self, tol: Optional[float], seed: int, cutoff: int = 14, positions: Sequence[int] = range(-4, 5)
    ) -> VerifyReport:
        rng = np.random.default_rng(seed)
        tally = Tally("schur-kernel", tol or SCHUR_KERNEL_TOL)

        one_row = SchurSpec.build([[Fraction(1, 2)]], [[Fraction(1, 2)]])
        tally.check("单行公式 ρ(1,0)", schur_kernel(one_row, 1, 0, 1, 0), Fraction(3, 16))
        tally.cases += 1

        for T in (1, 2):
            spec = _single_variable_spec(rng, T, False)
            for row in schur_verify_rows(spec, _point_sets(T, positions), cutoff, tally.tolerance):
                tally.check(row.points, row.kernel_value, row.oracle_value, tail=row.tail_bound)
                tally.cases += 1
        return tally.report()

    def verify_pf_schur_kernel(
        self, tol: Optional[float], seed: int, cutoff: int = 14, positions: Sequence[int] = range(-4, 5)
    ) -> VerifyReport:
        rng = np.random.default_rng(seed)
        tally = Tally("pf-schur-kernel", tol or PF_SCHUR_KERNEL_TOL)
        for T in (1, 2):
            spec = _single_variable_spec(rng, T, True)
            points = [SpacePoint(i, u) for i in range(1, T + 1) for u in positions]
            K = assemble_kernel(spec, points)
            tally.require(
                f"T={T} 核矩阵不是反对称矩阵（容差 {SKEW_TOL}）",
                bool(np.max(np.abs(K + K.T)) <= SKEW_TOL),
            )
            for row in schur_verify_rows(spec, _point_sets(T, positions), cutoff, tally.tolerance):
                tally.check(row.points, row.kernel_value, row.oracle_value, tail=row.tail_bound)
                tally.cases += 1

            for i in range(1, T + 1):
                for j in range(i, T + 1):
                    for u in (-1, 0, 1):
                        for v in (-1, 0, 1):
                            tally.check(
                                f"K₁₂ 留数 ({i},{u};{j},{v})",
                                k12_residue_difference(spec, i, u, j, v),
                                _residue_term(spec, i, u, j, v),
                                tail=RESIDUE_TOL,
                            )
                            tally.cases += 1
        return tally.report()

    def verify_contour(self, tol: Optional[float], seed: int) -> VerifyReport:
        """内外围道的留数恒等式、基本积分与 ε 符号的Fourier系数"""
        rng = np.random.default_rng(seed)
        tally = Tally("contour", tol or RESIDUE_TOL)
        unit = ContourConfig(1.0, 1.0)
        tally.check("∮∮ 1/(zw)", contour_integrate(lambda z, w: 1 / (z * w), unit).value, 1.0)
        tally.check(
            "∮∮ z⁻¹w⁻¹/(1 − zw/4)",
            contour_integrate(lambda z, w: 1 / (z * w * (1 - z * w / 4)), unit).value,
            1.0,
        )
        tally.check("解析被积函数", contour_integrate(lambda z, w: np.exp(z + w), unit).value, 0.0)
        tally.cases += 3

        for case in range(3):
            spec = _single_variable_spec(rng, 2, False)
            for i in range(1, 3):
                for j in range(i, 3):
                    for u in range(-2, 3):
                        for v in range(-2, 3):
                            tally.check(
                                f"case {case} 留数 ({i},{u};{j},{v})",
                                det_residue_difference(spec, i, u, j, v),
                                _residue_term(spec, i, u, j, v),
                            )
                            tally.cases += 1

        rho = _small_specialization(rng, 2)
        window = (-3, 3)
        E = epsilon_toeplitz(rho, window)
        for a, u in enumerate(range(window[0], window[1] + 1)):
            for b, v in enumerate(range(window[0], window[1] + 1)):
                tally.check(f"ε 符号 ({u},{v})", E[a, b], epsilon_symbol_coefficient(rho, v - u))
                tally.cases += 1

        for case in range(3):
            rho_minus = _small_specialization(rng, int(rng.integers(1, 3)))
            rho_plus = _small_specialization(rng, int(rng.integers(1, 3)))
            W = toeplitz_W(rho_minus, rho_plus, window)
            for a, u in enumerate(range(window[0], window[1] + 1)):
                for b, v in enumerate(range(window[0], window[1] + 1)):
                    tally.check(
                        f"case {case} W 符号 ({u},{v})",
                        W[a, b],
                        toeplitz_symbol_coefficient(rho_minus, rho_plus, u - v),
                        limit=SYMBOL_TOL,
                    )
                    tally.cases += 1
        return tally.report()

    # ------------------------------------------------------------ 抽象点

    def verify_abstract_points(self, tol: Optional[float], seed: int) -> VerifyReport:
        rng = np.random.default_rng(seed)
        tally = Tally("abstract-points", tol or 0.0)
        for case in range(10):
            table = random_table(rng, int(rng.integers(1, 6)))
            transformed = correlation_transform(tensor_point_from_table(table))
            rho = brute_force_correlations(table)
            for Y, value in rho.items():
                tally.check(f"关联变换 case {case} Y={Y}", transformed.coeff(Y.mask), value)
            tally.cases += 1

        moves = {
            "对角": lambda: [[_nonzero(rng), 0], [0, _nonzero(rng)]],
            "下三角幺幂": lambda: [[1, 0], [_nonzero(rng), 1]],
            "翻转": lambda: [[0, 1], [1, 0]],
            "一般": lambda: _random_gl2(rng),
        }
        for case in range(10):
            n = int(rng.integers(1, 5))
            w = random_witness(rng, n, int(rng.integers(0, 3)))
            p = point_from_kernel(w)
            for name, make in moves.items():
                j = int(rng.integers(1, n + 1))
                g = make()
                target = gl2_act(j, g, p)
                rebuilt = point_from_kernel(act_on_witness(j, g, w))
                tally.require(f"{name} case {case} 因子 {j} 见证不匹配", projectively_equal(rebuilt, target))
                tally.cases += 1
            flipped = point_from_kernel(flip_kernel(w))
            tally.require(
                f"翻转核 case {case}", projectively_equal(flipped, gl2_act(1, [[0, 1], [1, 0]], p))
            )

        for case in range(100):
            p = random_four_factor_point(rng, complex_values=case >= 50)
            try:
                image = point_from_kernel(four_factor_kernel(p, FOUR_FACTOR_FLOAT_TOL))
            except EngineError as exc:
                roots = [c.x for c in four_factor_candidates(p, FOUR_FACTOR_FLOAT_TOL)]
                tally.require(f"四因子 case {case}: {exc}（根 {roots}）", False)
                continue
            limit = 0.0 if image.exact else FOUR_FACTOR_FLOAT_TOL
            worst = max(deviation(a, b) for a, b in zip(image.coeffs, p.coeffs))
            tally.max_deviation = max(tally.max_deviation, worst)
            tally.require(f"四因子 case {case} 偏差 {worst:.3e}", worst <= max(limit, tol or 0.0))
            tally.cases += 1
        return tally.report()

    # ------------------------------------------------------------ 桥接

    def verify_em_bridge(
        self, tol: Optional[float], seed: int, N: int = 8, upper: int = 4
    ) -> VerifyReport:
        """截断Toeplitz链的 Eynard-Mehta 核与围道积分核在窗口 [−N, upper] 内部一致

        变量取 1/9 到 1/6，使窗口上端截去的质量（约 h_6(y)·x^6）小于 1e−8。
        """
        rng = np.random.default_rng(seed)
        tally = Tally("em-bridge", tol or BRIDGE_TOL)
        interior = range(-3, 3)
        for case in range(2):
            spec = SchurSpec(
                2,
                tuple(Specialization((Fraction(1, int(rng.integers(6, 10))),)) for _ in range(2)),
                tuple(Specialization((Fraction(1, int(rng.integers(6, 10))),)) for _ in range(2)),
            )
            bridge = em_bridge_spec(spec, N, upper)
            K = em_kernel(bridge).K
            points = [SpacePoint(i, u) for i in (1, 2) for u in interior]
            for a, p in enumerate(points):
                ia = bridge_index(bridge, p)
                tally.check(
                    f"case {case} K{p}{p}",
                    K[ia, ia],
                    schur_kernel(spec, p.level, p.u, p.level, p.u),
                )
                for q in points[a + 1 :]:
                    ib = bridge_index(bridge, q)
                    tally.check(
                        f"case {case} K{p}{q}·K{q}{p}",
                        K[ia, ib] * K[ib, ia],
                        schur_kernel(spec, p.level, p.u, q.level, q.u)
                        * schur_kernel(spec, q.level, q.u, p.level, p.u),
                    )
                tally.cases += 1
        return tally.report()


# ---------------------------------------------------------------- 辅助函数


def _embedded_config(n: int, Y: Config) -> Config:
    """多层基础集的构型平移到嵌入基础集（虚拟点在前）"""
    return Config(Y.mask << n, Y.size + n)


def _balanced(sizes: Sequence[int], Y: Config, per_level: int) -> bool:
    counts, offset = [], 0
    for size in sizes:
        counts.append(sum(1 for i in Y.members() if offset <= i < offset + size))
        offset += size
    return all(c == per_level for c in counts)


def _small_specialization(rng: np.random.Generator, count: int) -> Specialization:
    return Specialization(tuple(Fraction(1, int(rng.integers(3, 7))) for _ in range(count)))


def _nonzero(rng: np.random.Generator) -> Fraction:
    x = Fraction(int(rng.integers(1, 6)), int(rng.integers(1, 4)))
    return x if rng.random() < 0.5 else -x


def _random_gl2(rng: np.random.Generator) -> List[List[Fraction]]:
    while True:
        g = [[Fraction(int(rng.integers(-3, 4))) for _ in range(2)] for _ in range(2)]
        if g[0][0] * g[1][1] - g[0][1] * g[1][0] != 0:
            return g


def _point_sets(T: int, positions: Sequence[int]) -> List[List[SpacePoint]]:
    points = [SpacePoint(i, u) for i in range(1, T + 1) for u in positions]
    return [[p] for p in points] + [list(pair) for pair in combinations(points, 2)]


def _format_points(points: Sequence[SpacePoint]) -> str:
    return ",".join(str(p) for p in points)


def schur_verify_rows(
    spec: SchurSpec, point_sets: Sequence[Sequence[SpacePoint]], cutoff: int, tol: float
) -> List[SchurVerifyRow]:
    """每个点集上核的 det/pf 与截断枚举参照的比较"""
    rows = []
    for points in point_sets:
        K = assemble_kernel(spec, points)
        value = pfaffian(K) if spec.pfaffian_mode else det(K)
        estimate = brute_correlations(spec, points, cutoff)
        dev = deviation(value, estimate.value)
        rows.append(
            SchurVerifyRow(
                points=_format_points(points),
                kernel_value=value,
                oracle_value=estimate.value,
                tail_bound=estimate.tail_bound,
                deviation=dev,
                passed=dev <= tol + estimate.tail_bound,
            )
        )
    return rows


def _residue_term(spec: SchurSpec, i: int, u: int, j: int, v: int) -> Scalar:
    """−W_{[i,j)}(u,v)，i = j 时为 −δ_uv"""
    return -toeplitz_chain_entry(spec.minus_union(i, j), spec.plus_union(i, j), u, v)


def _radii(spec: SchurSpec) -> Tuple[float, float]:
    """(R, r)：同 kernel_contours 的半径规则"""
    rho = max(spec.max_modulus, settings.rho_floor)
    return (1 + 1 / rho) / 2, (1 + rho) / 2


def det_residue_difference(spec: SchurSpec, i: int, u: int, j: int, v: int) -> complex:
    """同一组参数分别用 |z|=|w|=r < 1 与 |z|=|w|=R > 1 的围道求值之差"""
    R, r = _radii(spec)
    inside, outside = ContourConfig(r, r), ContourConfig(R, R)
    return schur_kernel(spec, i, u, j, v, inside) - schur_kernel(spec, i, u, j, v, outside)


def k12_residue_difference(spec: SchurSpec, i: int, u: int, j: int, v: int) -> complex:
    """K₁₂ 在 |zw| < 1 与 |zw| > 1 两种围道下的差"""
    R, _ = _radii(spec)
    near, far = ContourConfig(R, 1 / (2 * R)), ContourConfig(R, R)
    return pf_kernel_entry(spec, "12", i, u, j, v, near) - pf_kernel_entry(spec, "12", i, u, j, v, far)


def epsilon_symbol_coefficient(rho: Specialization, power: int) -> complex:
    """(z⁻¹ − z)H(ρ;z)H(ρ;z⁻¹) 在单位圆上的 z^power 系数"""

    def symbol(z, w):
        return (1 / z - z) * H_eval(rho, z) * H_eval(rho, 1 / z) + 0 * w

    unit = ContourConfig(1.0, 1.0)
    return laurent_coefficient(symbol, unit, power, 0).value


def toeplitz_symbol_coefficient(
    rho_minus: Specialization, rho_plus: Specialization, power: int
) -> complex:
    """H(ρ⁻;z)H(ρ⁺;z⁻¹) 在单位圆上的 z^power 系数"""

    def symbol(z, w):
        return H_eval(rho_minus, z) * H_eval(rho_plus, 1 / z) + 0 * w

    unit = ContourConfig(1.0, 1.0)
    return laurent_coefficient(symbol, unit, power, 0).value



# 创建全局验证服务实例
verification_service = VerificationService()
