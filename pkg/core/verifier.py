"""
Verification suites: every closed form is checked as an exact rational identity
against independently computed values on generated point sets
"""

import logging
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from models.types import (Family, HaarIndex, Mismatch, NetSpec, RegionId,
                          ShiftVector, SuiteResult)
from core import cases, discrepancy, formulas, haar, netgen
from utils.bits import all_bit_vectors, format_bits
from utils.serialization import format_fraction

logger = logging.getLogger(__name__)


class _SuiteStopped(Exception):
    pass


class _Recorder:
    """记录检查次数，首个不匹配时终止套件"""

    def __init__(self, result: SuiteResult):
        self.result = result

    def equal(self, identity: str, params: str, expected, actual):
        self.result.count(identity)
        if expected != actual:
            self._fail(identity, params, expected, actual)

    def holds(self, identity: str, params: str, condition: bool, detail: str = "true"):
        self.result.count(identity)
        if not condition:
            self._fail(identity, params, detail, "false")

    def _fail(self, identity, params, expected, actual):
        show = lambda v: format_fraction(v) if isinstance(v, Fraction) else str(v)
        self.result.mismatch = Mismatch(identity=identity, params=params,
                                        expected=show(expected), actual=show(actual))
        raise _SuiteStopped()


def _random_bits(rng: np.random.Generator, length: int) -> Tuple[int, ...]:
    return tuple(int(b) for b in rng.integers(0, 2, size=length))


def _parameter_cases(n: int, opts: Dict, rng: np.random.Generator) -> Iterator[Tuple[tuple, tuple]]:
    """n不超过exhaustive_max时穷举(a, σ)，否则随机抽样"""
    if n <= opts.get("exhaustive_max", 4):
        for a in all_bit_vectors(n - 1):
            for s in all_bit_vectors(n):
                yield a, s
    else:
        for _ in range(opts.get("samples", 200)):
            yield _random_bits(rng, n - 1), _random_bits(rng, n)


def _tag(n, a=None, s=None) -> str:
    parts = [f"n={n}"]
    if a is not None:
        parts.append(f"a={format_bits(a)}")
    if s is not None:
        parts.append(f"shift={format_bits(s)}")
    return ", ".join(parts)


def suite_netgen(rec: _Recorder, opts: Dict, rng):
    for n in range(1, opts.get("n_max", 8) + 1):
        for a, s in _parameter_cases(n, opts, rng):
            shift = ShiftVector(s)
            for spec in (NetSpec.pa(n, a, s), NetSpec.pc(n, a, s)):
                c1, c2 = netgen.build_generators(spec)
                tag = f"{spec.family.value}, {_tag(n, a, s)}"
                rec.holds("net-rank", tag, netgen.is_0n2_net(c1, c2, "rank"))
                rec.holds("net-counting", tag, netgen.is_0n2_net(c1, c2, "counting"))
            plain = netgen.generate(NetSpec.pa(n, a, s))
            direct = netgen.generate_pa_direct(n, a, shift)
            rec.equal("direct-construction", _tag(n, a, s), plain.multiset(), direct.multiset())
            union = plain.points + netgen.generate(NetSpec.pa(n, a, shift.complement().bits)).points
            rec.equal("symmetrize-union", _tag(n, a, s),
                      sorted(union), netgen.symmetrize(plain).multiset())
        for k, entries in enumerate(_tri_cases(n, opts, rng)):
            c1, c2 = netgen.build_generators(NetSpec.tri(n, entries))
            tag = f"tri, n={n}, case={k}"
            rec.holds("net-rank", tag, netgen.is_0n2_net(c1, c2, "rank"))
            rec.holds("net-counting", tag, netgen.is_0n2_net(c1, c2, "counting"))


def suite_theorems(rec: _Recorder, opts: Dict, rng):
    for n in range(1, opts.get("n_max", 8) + 1):
        for a, s in _parameter_cases(n, opts, rng):
            points = netgen.generate(NetSpec.pa(n, a, s))
            warnock = discrepancy.warnock_l2_squared(points)
            rec.equal("theorem-pa-warnock", _tag(n, a, s), warnock, formulas.l2sq_pa(n, a, s))
            rec.equal("theorem-pa-parseval", _tag(n, a, s),
                      warnock, haar.parseval_l2_squared(points, n) * points.N ** 2)
        zeros = (0,) * (n - 1)
        for z in range(n + 1):
            hamm = formulas.l2sq_hammersley_shifted(n, z)
            rec.equal("hammersley-zero-count", f"n={n}, z={z}", hamm,
                      formulas.l2sq_pa(n, zeros, (1,) * (n - z) + (0,) * z))
        for weight in range(n):
            a = (1,) * weight + (0,) * (n - 1 - weight)
            rec.equal("corollary-unshifted", f"n={n}, |a|={weight}",
                      formulas.l2sq_pa(n, a, (0,) * n), formulas.l2sq_pa_unshifted(n, weight))


def suite_symmetrized(rec: _Recorder, opts: Dict, rng):
    for n in range(1, opts.get("n_max", 7) + 1):
        for a, s in _parameter_cases(n, opts, rng):
            points = netgen.generate(NetSpec.pa(n, a, s, symmetrized=True))
            warnock = discrepancy.warnock_l2_squared(points)
            rec.equal("theorem-sym-warnock", _tag(n, a, s), warnock, formulas.l2sq_sym_pa(n, a, s))
            rec.equal("theorem-sym-parseval", _tag(n, a, s),
                      warnock, haar.parseval_l2_squared(points, n) * points.N ** 2)


def suite_pc(rec: _Recorder, opts: Dict, rng):
    for n in range(1, opts.get("n_max", 8) + 1):
        for c, s in _parameter_cases(n, opts, rng):
            points = netgen.generate(NetSpec.pc(n, c, s))
            warnock = discrepancy.warnock_l2_squared(points)
            rec.equal("theorem-pc-warnock", _tag(n, c, s), warnock, formulas.l2sq_pc(n, c, s))
            rec.equal("theorem-pc-parseval", _tag(n, c, s),
                      warnock, haar.parseval_l2_squared(points, n) * points.N ** 2)
        if n <= 5:
            for c in all_bit_vectors(n - 1):
                rec.equal("corollary-pc-unshifted", _tag(n, c),
                          formulas.l2sq_pc(n, c, (0,) * n), formulas.l2sq_pc_unshifted(n, sum(c)))


def _proposition_cases(n: int, opts: Dict, rng):
    """a在n≤exhaustive_max时穷举，σ抽样"""
    if n <= opts.get("exhaustive_max", 4):
        weights = list(all_bit_vectors(n - 1))
    else:
        weights = [_random_bits(rng, n - 1) for _ in range(opts.get("samples", 8))]
    for a in weights:
        for _ in range(opts.get("shifts", 2)):
            yield a, _random_bits(rng, n)


def suite_propositions(rec: _Recorder, opts: Dict, rng):
    for n in range(1, opts.get("n_max", 6) + 1):
        for a, s in _proposition_cases(n, opts, rng):
            shift = ShiftVector(s)
            plain = netgen.generate(NetSpec.pa(n, a, s))
            dual = netgen.generate(NetSpec.pa(n, a, shift.complement().bits))
            sym = netgen.symmetrize(plain)
            for j1 in range(-1, n):
                for j2 in range(-1, n):
                    lp = haar.level_coefficients(plain, j1, j2)
                    ld = haar.level_coefficients(dual, j1, j2)
                    ls = haar.level_coefficients(sym, j1, j2)
                    for m1, m2, mu in lp.items():
                        index = HaarIndex(j1, j2, m1, m2)
                        tag = f"{_tag(n, a, s)}, j=({j1},{j2}), m=({m1},{m2})"
                        generic_sym = ls.value(m1, m2)
                        rec.equal("case-coefficient", tag,
                                  abs(mu), abs(cases.case_coefficient_pa(n, a, shift, index)))
                        rec.equal("sym-case-coefficient", tag,
                                  abs(generic_sym), abs(cases.sym_case_coefficient(n, a, shift, index)))
                        rec.equal("sym-half-sum", tag, generic_sym, (mu + ld.value(m1, m2)) / 2)


def suite_oracle(rec: _Recorder, opts: Dict, rng):
    for n in range(1, opts.get("n_max", 4) + 1):
        levels = [(j1, j2) for j1 in range(-1, 2 * n + 1) for j2 in range(-1, 2 * n + 1)
                  if max(j1, 0) + max(j2, 0) <= 2 * n]
        for a in all_bit_vectors(n - 1):
            for _ in range(opts.get("shifts", 2)):
                s = _random_bits(rng, n)
                points = netgen.generate(NetSpec.pa(n, a, s))
                for j1, j2 in levels:
                    for m1, m2, mu in haar.level_coefficients(points, j1, j2).items():
                        index = HaarIndex(j1, j2, m1, m2)
                        tag = f"{_tag(n, a, s)}, j=({j1},{j2}), m=({m1},{m2})"
                        rec.equal("generic-vs-oracle", tag, haar.haar_coefficient_oracle(points, index), mu)
                        rec.equal("level-vs-single", tag, haar.haar_coefficient(points, index), mu)


def suite_lemmas(rec: _Recorder, opts: Dict, rng):
    for n in range(1, opts.get("n_max", 6) + 1):
        for a, s in _proposition_cases(n, opts, rng):
            shift = ShiftVector(s)
            for region in RegionId:
                tag = f"{_tag(n, a, s)}, {region.name}"
                rec.equal("region-sum", tag,
                          cases.region_parseval_sum(n, a, shift, region, "direct"),
                          cases.region_parseval_sum(n, a, shift, region, "closed"))
                rec.equal("sym-region-sum", tag,
                          cases.sym_region_parseval_sum(n, a, shift, region, "direct"),
                          cases.sym_region_parseval_sum(n, a, shift, region, "closed"))


def suite_shift_average(rec: _Recorder, opts: Dict, rng):
    for n in range(1, opts.get("n_max", 5) + 1):
        for a in ((0,) * (n - 1), (1,) * (n - 1)):
            values = [discrepancy.warnock_l2_squared(netgen.generate(NetSpec.pa(n, a, s)))
                      for s in all_bit_vectors(n)]
            rec.equal("shift-average", _tag(n, a), formulas.l2sq_pa_shift_average(n),
                      sum(values, Fraction(0)) / len(values))
            sym_values = [formulas.l2sq_sym_pa(n, a, s) for s in all_bit_vectors(n)]
            rec.equal("sym-shift-average", _tag(n, a), formulas.l2sq_sym_pa_shift_average(n),
                      sum(sym_values, Fraction(0)) / len(sym_values))


def suite_balanced(rec: _Recorder, opts: Dict, rng):
    for n in range(1, opts.get("n_max", 10) + 1):
        for a in all_bit_vectors(n - 1):
            p = formulas.shift_params(n, a, formulas.balanced_shift(n, a))
            rec.holds("balanced-bounds", _tag(n, a), abs(p.L) <= 1 and abs(p.ell - p.L) <= 2)
    for n in range(opts.get("below_average_from", 24), opts.get("below_average_to", 40) + 1):
        for _ in range(opts.get("samples", 20)):
            a = _random_bits(rng, n - 1)
            value = formulas.l2sq_pa(n, a, formulas.balanced_shift(n, a))
            rec.holds("balanced-below-average", _tag(n, a), value <= formulas.l2sq_pa_shift_average(n))


def suite_position(rec: _Recorder, opts: Dict, rng):
    n, weight = opts.get("n", 5), opts.get("weight", 2)
    expected = formulas.l2sq_pa_unshifted(n, weight)
    for ones in combinations(range(n - 1), weight):
        a = tuple(int(i in ones) for i in range(n - 1))
        points = netgen.generate(NetSpec.pa(n, a, (0,) * n))
        rec.equal("position-independence", _tag(n, a), expected, discrepancy.warnock_l2_squared(points))


def suite_counterexample(rec: _Recorder, opts: Dict, rng):
    for n in range(2, opts.get("n_max", 10) + 1):
        report = formulas.bilyk_counterexample_report(n)
        points = netgen.generate(NetSpec.pa(n, (1,) * (n - 1), (0,) * n))
        rec.equal("corner-coefficient", f"n={n}", haar.haar_coefficient(points, HaarIndex(-1, -1)),
                  report.mu_corner)
        rec.equal("corner-closed-form", f"n={n}",
                  Fraction(1, 2 ** (2 * n + 2)) + Fraction(5, 2 ** (n + 3)), report.mu_corner)
        rec.holds("corner-below-1/N", f"n={n}", report.mu_corner <= report.one_over_N)
        rec.holds("l2-not-optimal", f"n={n}", report.l2sq_scaled >= Fraction(n * n, 64))
    for n in range(2, opts.get("pc_n_max", 7) + 1):
        zero = (0,) * n
        spec = NetSpec.pc(n, (1,) * (n - 1), zero)
        index = HaarIndex(-1, 0)
        rec.equal("pc-coefficient", f"n={n}",
                  haar.haar_coefficient(netgen.generate(spec), index), formulas.mu_m10_pc(n, zero))
        sym = netgen.symmetrize(netgen.generate(spec))
        rec.equal("pc-sym-coefficient", f"n={n}",
                  haar.haar_coefficient(sym, index), formulas.sym_mu_m10_pc(n, zero))
        rec.equal("pc-sym-closed-form", f"n={n}",
                  Fraction(n - 2, 2 ** (n + 3)), formulas.sym_mu_m10_pc(n, zero))
        for c, s in _parameter_cases(n, {"exhaustive_max": 3, "samples": 10}, rng):
            sym = netgen.generate(NetSpec.pc(n, c, s, symmetrized=True))
            level = haar.level_coefficients(sym, -1, 0)
            rec.equal("pc-sym-term", _tag(n, c, s),
                      level.weighted_square_sum(), formulas.sym_pc_j_m10_term(n, c, s))


def suite_audit(rec: _Recorder, opts: Dict, rng):
    for n in opts.get("n_values", [4, 5, 6]):
        for _ in range(opts.get("samples", 20)):
            a, s = _random_bits(rng, n - 1), _random_bits(rng, n)
            spec = NetSpec.pa(n, a, s)
            report = haar.coefficient_bound_audit(netgen.generate(spec), n, spec)
            for branch in report.branches:
                rec.holds(f"audit{branch.name}", _tag(n, a, s), branch.success,
                          f"at most {branch.allowed} exceptions, got {branch.exceptions}")


def _random_tri(n: int, rng) -> Dict[Tuple[int, int], int]:
    return {(i, j): int(rng.integers(0, 2)) for i in range(1, n + 1) for j in range(i + 1, n + 1)}


def _tri_cases(n: int, opts: Dict, rng) -> Iterator[Dict[Tuple[int, int], int]]:
    """上三角元在n≤exhaustive_max时穷举，否则随机抽样"""
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    if n <= opts.get("exhaustive_max", 4):
        for bits in all_bit_vectors(len(pairs)):
            yield dict(zip(pairs, bits))
    else:
        for _ in range(opts.get("samples", 50)):
            yield _random_tri(n, rng)


def suite_tri(rec: _Recorder, opts: Dict, rng):
    n_max = opts.get("n_max", 6)
    for k in range(opts.get("samples", 50)):
        n = 1 + k % n_max
        spec = NetSpec.tri(n, _random_tri(n, rng))
        points = netgen.generate(spec)
        corner, row = formulas.ptri_corner_coefficients(n, spec.tri_entries)
        tag = f"n={n}, sample={k}"
        c1, c2 = netgen.build_generators(spec)
        rec.holds("tri-net", tag, netgen.is_0n2_net(c1, c2, "rank"))
        rec.holds("tri-net-counting", tag, netgen.is_0n2_net(c1, c2, "counting"))
        rec.equal("tri-corner", tag, haar.haar_coefficient(points, HaarIndex(-1, -1)), corner)
        rec.equal("tri-row", tag, haar.haar_coefficient(points, HaarIndex(0, -1)), row)
    for n in range(2, n_max + 1):
        displays = {
            "last-columns": {(i, j): 1 for j in (n - 1, n) for i in range(1, j)},
            "superdiagonal": {(i, i + 1): 1 for i in range(1, n)},
        }
        for name, entries in displays.items():
            spec = NetSpec.tri(n, entries)
            corner, row = formulas.ptri_corner_coefficients(n, spec.tri_entries)
            tag = f"n={n}, {name}"
            rec.holds("tri-display-corner", tag,
                      abs(corner) <= Fraction(5, 8 * 2 ** n) + Fraction(1, 2 ** (2 * n + 2)))
            rec.equal("tri-display-row", tag, Fraction(1, 2 ** (2 * n + 2)), abs(row))


def suite_star(rec: _Recorder, opts: Dict, rng):
    for n in range(1, opts.get("n_max", 8) + 1):
        bound = discrepancy.star_bound(n)
        for a, s in _parameter_cases(n, opts, rng):
            for spec in (NetSpec.pa(n, a, s), NetSpec.pc(n, a, s)):
                value = discrepancy.star_discrepancy(netgen.generate(spec)) * 2 ** n
                rec.holds("star-bound", f"{spec.family.value}, {_tag(n, a, s)}", value <= bound,
                          f"2^n D* <= {format_fraction(bound)}")


def suite_slope(rec: _Recorder, opts: Dict, rng):
    slope = formulas.sym_excess_slope(opts.get("n_lo", 4), opts.get("n_hi", 64))
    tolerance = opts.get("tolerance", 0.05)
    rec.holds("sym-excess-slope", f"slope={slope:.4f}", abs(slope - 1) <= tolerance,
              f"|slope-1| <= {tolerance}")


def suite_mc(rec: _Recorder, opts: Dict, rng):
    n = opts.get("n", 3)
    points = netgen.generate(NetSpec.pa(n, (0,) * (n - 1), (0,) * n))
    exact = float(discrepancy.warnock_l2_squared(points) / points.N ** 2) ** 0.5
    seeds = opts.get("seeds", 100)
    inside = 0
    for seed in range(seeds):
        est = discrepancy.lp_discrepancy_mc(points, 2.0, opts.get("samples", 1_000_000), seed,
                                            threads=opts.get("threads"))
        inside += abs(est.estimate - exact) <= 4 * est.std_error
    rec.holds("mc-coverage", f"n={n}, {inside}/{seeds} within 4 std errors",
              inside >= opts.get("min_inside", 99))


SUITES: Dict[str, Callable] = {
    "netgen": suite_netgen,
    "theorems": suite_theorems,
    "symmetrized": suite_symmetrized,
    "pc": suite_pc,
    "oracle": suite_oracle,
    "propositions": suite_propositions,
    "lemmas": suite_lemmas,
    "shift-average": suite_shift_average,
    "balanced": suite_balanced,
    "position": suite_position,
    "counterexample": suite_counterexample,
    "audit": suite_audit,
    "tri": suite_tri,
    "star": suite_star,
    "slope": suite_slope,
    "mc": suite_mc,
}


def run_suite(name: str, options: Optional[Dict] = None) -> SuiteResult:
    """
    运行单个验证套件

    Args:
        name: 套件名称
        options: 套件参数（n_max、samples、seed等）
    Returns:
        SuiteResult，mismatch字段给出首个不成立的恒等式
    """
    if name not in SUITES:
        raise KeyError(name)
    opts = dict(options or {})
    result = SuiteResult(suite=name)
    rng = np.random.default_rng(opts.get("seed", 20240601))
    try:
        SUITES[name](_Recorder(result), opts, rng)
    except _SuiteStopped:
        logger.error(f"suite {name}: {result.mismatch.identity} failed at {result.mismatch.params}")
    logger.info(result.get_summary())
    return result


def run_suites(names: Sequence[str], options_for: Callable[[str], Dict]) -> List[SuiteResult]:
    """依次运行多个套件；names含all时运行全部"""
    if "all" in names:
        names = list(SUITES)
    return [run_suite(name, options_for(name)) for name in names]
