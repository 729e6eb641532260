#!/usr/bin/env python3
"""
Digital Net Discrepancy CLI - 命令行界面
"""

import argparse
import logging
import os
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config.settings import Settings, load_settings
from core import cases, discrepancy, formulas, haar, netgen, sweeper, verifier
from core.renderer import ReportRenderer
from models.errors import NetError, ParameterError, UnsupportedError
from models.types import (BitMatrix, CommandRequest, CommandResult, Family, HaarIndex,
                          NetSpec, ShiftVector)
from utils.bits import format_bits, parse_bits
from utils.serialization import (dump_coefficients, dump_points, load_points,
                                 to_csv, to_document)

logger = logging.getLogger(__name__)

SUBCOMMANDS = ('gen', 'l2', 'star', 'lp-mc', 'haar', 'verify', 'sweep',
               'search-shift', 'counterexample', 'init-db', 'history')


class CliArgumentParser(argparse.ArgumentParser):
    """参数错误时以退出码1结束"""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"✗ {message}\n")
        sys.exit(1)


def _add_spec_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--family', choices=[f.value for f in Family], default='pa', help='网族')
    parser.add_argument('--n', type=int, help='网参数n')
    parser.add_argument('--a', help='PA权重位串a_1..a_{n-1}')
    parser.add_argument('--c', help='PC权重位串c_2..c_n')
    parser.add_argument('--tri', help='TRI上三角元素位串，按(1,2),(1,3),...,(n-1,n)顺序')
    parser.add_argument('--c1', help='CUSTOM矩阵C1，逗号分隔的行')
    parser.add_argument('--c2', help='CUSTOM矩阵C2，逗号分隔的行')
    parser.add_argument('--shift', help='平移位串σ_1..σ_n，缺省为0')
    parser.add_argument('--symmetrized', action='store_true', help='对称化网')
    parser.add_argument('--points', help='点集文件（res <n>加每行X Y），替代网规格')


def setup_argument_parser() -> argparse.ArgumentParser:
    """设置命令行参数解析器"""
    parser = CliArgumentParser(
        prog='digital-net',
        description='Digital Net Discrepancy - 数字网L2偏差的精确计算与验证',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例用法:
  # 生成平移Hammersley点集
  digital-net gen --n 3 --a 00 --shift 010 --format dump

  # 三种方法计算L2偏差
  digital-net l2 --family pa --n 1 --a "" --shift 0 --method formula
  digital-net l2 --family pa --n 1 --a "" --shift 0 --method warnock

  # 运行验证套件
  digital-net verify --suite theorems --n-max 4

  # 遍历全部平移并输出CSV
  digital-net sweep --over shifts --n 4 --a 101 --format csv
        """
    )
    parser.add_argument('--log-level', help='日志级别（缺省取DNET_LOG_LEVEL）')
    parser.add_argument('--record', action='store_true', help='把运行结果写入运行记录数据库')
    parser.add_argument('--out', help='输出文件（可选，默认输出到控制台）')

    subparsers = parser.add_subparsers(dest='command', help='可用命令')

    gen_parser = subparsers.add_parser('gen', help='生成点集')
    _add_spec_arguments(gen_parser)
    gen_parser.add_argument('--check', choices=['rank', 'counting'], help='同时检查(0,n,2)-网性质')
    gen_parser.add_argument('--format', choices=['json', 'dump'], default='json')

    l2_parser = subparsers.add_parser('l2', help='计算L2偏差')
    _add_spec_arguments(l2_parser)
    l2_parser.add_argument('--method', choices=['formula', 'warnock', 'parseval'], default='formula')
    l2_parser.add_argument('--format', choices=['json', 'text'], default='json')

    star_parser = subparsers.add_parser('star', help='计算星偏差')
    _add_spec_arguments(star_parser)

    mc_parser = subparsers.add_parser('lp-mc', help='蒙特卡洛估计L_p偏差')
    _add_spec_arguments(mc_parser)
    mc_parser.add_argument('--p', type=float, default=2.0, help='指数p，1<p<∞')
    mc_parser.add_argument('--samples', type=int, default=100000)
    mc_parser.add_argument('--seed', type=int, default=0)

    haar_parser = subparsers.add_parser('haar', help='Haar系数')
    _add_spec_arguments(haar_parser)
    haar_parser.add_argument('--j1', type=int, default=-1)
    haar_parser.add_argument('--j2', type=int, default=-1)
    haar_parser.add_argument('--m1', type=int, default=0)
    haar_parser.add_argument('--m2', type=int, default=0)
    haar_parser.add_argument('--method', choices=['generic', 'oracle', 'case'], default='generic')
    haar_parser.add_argument('--dump', action='store_true', help='输出全部系数（j1 j2 m1 m2 num/den）')
    haar_parser.add_argument('--max-level', type=int, help='--dump的最高层，缺省n-1')
    haar_parser.add_argument('--audit', action='store_true', help='系数量级审计')

    verify_parser = subparsers.add_parser('verify', help='运行验证套件')
    verify_parser.add_argument('--suite', default='all',
                               help=f"套件名，逗号分隔：{', '.join(verifier.SUITES)}，或all")
    verify_parser.add_argument('--n-max', type=int, help='覆盖套件的n_max')
    verify_parser.add_argument('--samples', type=int, help='覆盖抽样数')
    verify_parser.add_argument('--seed', type=int, help='覆盖抽样种子')
    verify_parser.add_argument('--suites-file', help='套件配置YAML')
    verify_parser.add_argument('--format', choices=['json', 'text'], default='json')

    sweep_parser = subparsers.add_parser('sweep', help='参数遍历')
    _add_spec_arguments(sweep_parser)
    sweep_parser.add_argument('--over', choices=['shifts', 'weights'], default='shifts')
    sweep_parser.add_argument('--format', choices=['json', 'csv'], default='json')

    search_parser = subparsers.add_parser('search-shift', help='搜索最优平移')
    search_parser.add_argument('--n', type=int, required=True)
    search_parser.add_argument('--a', help='PA权重位串，缺省为0')
    search_parser.add_argument('--format', choices=['json', 'text'], default='json')

    counter_parser = subparsers.add_parser('counterexample', help='a=1...1网的反例报告')
    counter_parser.add_argument('--n', type=int, required=True)
    counter_parser.add_argument('--format', choices=['json', 'text'], default='json')

    subparsers.add_parser('init-db', help='初始化运行记录数据库')

    history_parser = subparsers.add_parser('history', help='列出最近的运行记录')
    history_parser.add_argument('--limit', type=int, default=20)

    return parser


def request_from_args(args: argparse.Namespace) -> CommandRequest:
    """把解析结果整理为CommandRequest"""
    spec_keys = ('family', 'n', 'a', 'c', 'tri', 'symmetrized', 'method', 'format')
    values = {key: getattr(args, key) for key in spec_keys if getattr(args, key, None) is not None}
    if getattr(args, 'c1', None) or getattr(args, 'c2', None):
        values['matrices'] = (args.c1 or '', args.c2 or '')
    values['shift'] = getattr(args, 'shift', None)
    skip = set(spec_keys) | {'command', 'c1', 'c2', 'shift', 'log_level', 'out'}
    options = {key: value for key, value in vars(args).items() if key not in skip}
    return CommandRequest(subcommand=args.command, options=options, **values)


def build_spec(request: CommandRequest) -> NetSpec:
    """由请求构造网规格"""
    if request.n is None:
        raise ParameterError("--n is required")
    n = request.n
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    family = Family(request.family or 'pa')
    shift = ShiftVector(parse_bits(request.shift if request.shift is not None else '0' * n, n, 'shift'))
    if family is Family.PA:
        a = parse_bits(request.a if request.a is not None else '0' * (n - 1), n - 1, 'a')
        return NetSpec(family, n, shift, request.symmetrized, a=a)
    if family is Family.PC:
        c = parse_bits(request.c if request.c is not None else '0' * (n - 1), n - 1, 'c')
        return NetSpec(family, n, shift, request.symmetrized, c=c)
    if family is Family.TRI:
        pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        bits = parse_bits(request.tri or '0' * len(pairs), len(pairs), 'triangular entries')
        return NetSpec.tri(n, dict(zip(pairs, bits)), shift.bits, request.symmetrized)
    if not request.matrices:
        raise ParameterError("custom family needs --c1 and --c2")
    c1, c2 = (BitMatrix.from_strings([row for row in text.split(',') if row]) for text in request.matrices)
    return NetSpec(family, n, shift, request.symmetrized, matrices=(c1, c2))


def spec_summary(spec: NetSpec) -> Dict[str, Any]:
    summary = {'family': spec.family.value, 'n': spec.n}
    if spec.family in (Family.PA, Family.PC):
        summary['a' if spec.family is Family.PA else 'c'] = format_bits(spec.weights())
    summary['shift'] = format_bits(spec.shift.bits)
    summary['symmetrized'] = spec.symmetrized
    return summary


def _points_for(request: CommandRequest):
    """(点集, 网规格或None, 分辨率n)"""
    path = request.options.get('points')
    if path:
        with open(path, 'r', encoding='utf-8') as f:
            points = load_points(f.read())
        return points, None, points.resolution
    spec = build_spec(request)
    return netgen.generate(spec), spec, spec.n


def _scale(spec: Optional[NetSpec]) -> str:
    if spec is None:
        return '(N L2)^2'
    return '(2^(n+1) L2)^2' if spec.symmetrized else '(2^n L2)^2'


Outcome = Tuple[int, Dict[str, Any], Optional[str]]


def cmd_gen(request: CommandRequest, settings: Settings) -> Outcome:
    """生成点集命令"""
    spec = build_spec(request)
    c1, c2 = netgen.build_generators(spec)
    points = netgen.generate(spec)
    payload = {'command': 'gen', 'spec': spec_summary(spec),
               'matrices': {'C1': c1.to_strings(), 'C2': c2.to_strings()},
               'resolution': points.resolution, 'N': points.N,
               'points': [list(p) for p in points.points]}
    check = request.options.get('check')
    if check:
        payload['is_0n2_net'] = netgen.is_0n2_net(c1, c2, check)
    text = dump_points(points) if request.format == 'dump' else None
    return 0, payload, text


def _formula_value(spec: NetSpec) -> Fraction:
    if spec.family is Family.PA:
        if spec.symmetrized:
            return formulas.l2sq_sym_pa(spec.n, spec.a, spec.shift)
        return formulas.l2sq_pa(spec.n, spec.a, spec.shift)
    if spec.family is Family.PC and not spec.symmetrized:
        return formulas.l2sq_pc(spec.n, spec.c, spec.shift)
    raise UnsupportedError(f"no closed form for {spec.family.value}"
                           f"{' symmetrized' if spec.symmetrized else ''} nets; use warnock or parseval")


def cmd_l2(request: CommandRequest, settings: Settings) -> Outcome:
    """L2偏差命令"""
    method = request.method or 'formula'
    if method == 'formula':
        if request.options.get('points'):
            raise UnsupportedError("formula method needs a net specification, not a point file")
        spec = build_spec(request)
        value = _formula_value(spec)
        N = 2 ** (spec.n + 1) if spec.symmetrized else 2 ** spec.n
    else:
        points, spec, n = _points_for(request)
        N = points.N
        if method == 'warnock':
            value = discrepancy.warnock_l2_squared(points)
        else:
            value = haar.parseval_l2_squared(points, n, settings.threads) * N * N
    payload = {'command': 'l2', 'spec': spec_summary(spec) if spec else None, 'method': method,
               'scale': _scale(spec), 'value': value,
               'unscaled': formulas.l2_squared_unscaled(value, N)}
    text = None
    if request.format == 'text':
        text = ReportRenderer().render('l2', {
            'family': spec.family.value if spec else 'points', 'n': spec.n if spec else N,
            'symmetrized': bool(spec and spec.symmetrized), 'method': method,
            'scale': payload['scale'], 'value': value, 'approx': float(value)})
    return 0, payload, text


def cmd_star(request: CommandRequest, settings: Settings) -> Outcome:
    """星偏差命令"""
    points, spec, n = _points_for(request)
    value = discrepancy.star_discrepancy(points)
    payload = {'command': 'star', 'spec': spec_summary(spec) if spec else None, 'value': value}
    if spec is not None and not spec.symmetrized:
        scaled = value * 2 ** n
        bound = discrepancy.star_bound(n)
        payload.update({'scaled': scaled, 'bound': bound, 'within_bound': scaled <= bound})
    return 0, payload, None


def cmd_lp_mc(request: CommandRequest, settings: Settings) -> Outcome:
    """蒙特卡洛L_p命令"""
    points, spec, _ = _points_for(request)
    opts = request.options
    est = discrepancy.lp_discrepancy_mc(points, opts['p'], opts['samples'], opts['seed'], settings.threads)
    payload = {'command': 'lp-mc', 'spec': spec_summary(spec) if spec else None,
               'p': est.p, 'samples': est.samples, 'seed': est.seed,
               'estimate': est.estimate, 'std_error': est.std_error}
    return 0, payload, None


def cmd_haar(request: CommandRequest, settings: Settings) -> Outcome:
    """Haar系数命令"""
    points, spec, n = _points_for(request)
    opts = request.options
    if opts.get('audit'):
        if spec is None or spec.family is not Family.PA or spec.symmetrized:
            raise UnsupportedError("the coefficient audit applies to plain pa nets")
        report = haar.coefficient_bound_audit(points, n, spec)
        payload = {'command': 'haar', 'spec': spec_summary(spec), 'audit': [
            {'branch': b.name, 'checked': b.checked, 'exceptions': b.exceptions,
             'allowed': b.allowed, 'max_scaled': b.max_scaled, 'success': b.success}
            for b in report.branches], 'success': report.success}
        return (0 if report.success else 2), payload, None

    if opts.get('dump'):
        top = opts.get('max_level')
        top = n - 1 if top is None else top
        rows = []
        for j1 in range(-1, top + 1):
            for j2 in range(-1, top + 1):
                level = haar.level_coefficients(points, j1, j2)
                rows.extend((j1, j2, m1, m2, mu) for m1, m2, mu in level.items())
        return 0, {'command': 'haar', 'dump': len(rows)}, dump_coefficients(rows)

    index = HaarIndex(opts['j1'], opts['j2'], opts['m1'], opts['m2'])
    method = request.method or 'generic'
    if method == 'generic':
        value = haar.haar_coefficient(points, index)
    elif method == 'oracle':
        value = haar.haar_coefficient_oracle(points, index)
    else:
        if spec is None or spec.family is not Family.PA:
            raise UnsupportedError("case coefficients are defined for pa nets")
        fn = cases.sym_case_coefficient if spec.symmetrized else cases.case_coefficient_pa
        value = fn(spec.n, spec.a, spec.shift, index)
    payload = {'command': 'haar', 'spec': spec_summary(spec) if spec else None, 'method': method,
               'j': [index.j1, index.j2], 'm': [index.m1, index.m2], 'value': value}
    if n >= 1:
        payload['region'] = haar.classify_region(index.j, n).name
    return 0, payload, None


def _suite_result_payload(result) -> Dict[str, Any]:
    return {
        'suite': result.suite,
        'success': result.success,
        'checked': result.checked,
        'total': result.total_checked,
        'mismatch': vars(result.mismatch) if result.mismatch else None,
        'error': result.error,
    }


def cmd_verify(request: CommandRequest, settings: Settings) -> Outcome:
    """验证套件命令"""
    opts = request.options
    if opts.get('suites_file'):
        settings = load_settings(opts['suites_file'])
    names = [name.strip() for name in opts.get('suite', 'all').split(',') if name.strip()]
    unknown = [name for name in names if name != 'all' and name not in verifier.SUITES]
    if unknown:
        raise ParameterError(f"unknown suite(s): {', '.join(unknown)}")

    def options_for(name: str) -> Dict[str, Any]:
        merged = settings.suite_options(name)
        for key in ('n_max', 'samples', 'seed'):
            if opts.get(key) is not None:
                merged[key] = opts[key]
        merged.setdefault('threads', settings.threads)
        return merged

    results = verifier.run_suites(names, options_for)
    success = all(r.success for r in results)
    payload = {'command': 'verify', 'success': success,
               'total': sum(r.total_checked for r in results),
               'results': [_suite_result_payload(r) for r in results],
               '_suites': results}
    text = None
    if request.format == 'text':
        text = ReportRenderer().render('verify', {'results': payload['results'], 'success': success})
    return (0 if success else 2), payload, text


def cmd_sweep(request: CommandRequest, settings: Settings) -> Outcome:
    """参数遍历命令"""
    spec = build_spec(request)
    over = request.options.get('over', 'shifts')
    if over == 'shifts':
        rows = sweeper.sweep_shifts(spec.n, spec.weights(), spec.family, spec.symmetrized, settings.threads)
    else:
        rows = sweeper.sweep_weights(spec.n, spec.shift.bits, spec.family, spec.symmetrized, settings.threads)
    payload = {'command': 'sweep', 'spec': spec_summary(spec), 'over': over,
               'scale': _scale(spec), 'mean': sweeper.rows_mean(rows),
               'rows': [vars(row) for row in rows]}
    if over == 'shifts' and spec.family is Family.PA:
        payload['shift_average'] = (formulas.l2sq_sym_pa_shift_average(spec.n) if spec.symmetrized
                                    else formulas.l2sq_pa_shift_average(spec.n))
    text = None
    if request.format == 'csv':
        text = to_csv(['n', 'a', 'shift', 'ell', 'L', 'value'],
                      [(r.n, r.a, r.shift, r.ell, r.L, r.value) for r in rows])
    return 0, payload, text


def cmd_search_shift(request: CommandRequest, settings: Settings) -> Outcome:
    """最优平移搜索命令"""
    n = request.n
    if n is None or n < 1:
        raise ParameterError("--n must be a positive integer")
    a = parse_bits(request.a if request.a is not None else '0' * (n - 1), n - 1, 'a')
    result = sweeper.search_shift(n, a)
    average = formulas.l2sq_pa_shift_average(n)
    payload = {'command': 'search-shift', 'n': n, 'a': result.a, 'shift': result.shift,
               'value': result.value, 'mode': result.mode, 'evaluated': result.evaluated,
               'shift_average': average, 'scale': '(2^n L2)^2'}
    text = None
    if request.format == 'text':
        text = ReportRenderer().render('search-shift', dict(vars(result), average=average))
    return 0, payload, text


def cmd_counterexample(request: CommandRequest, settings: Settings) -> Outcome:
    """反例报告命令"""
    report = formulas.bilyk_counterexample_report(request.n)
    payload = dict({'command': 'counterexample'}, **vars(report))
    payload['corner_below_1_over_N'] = report.mu_corner <= report.one_over_N
    text = None
    if request.format == 'text':
        text = ReportRenderer().render('counterexample', vars(report))
    return 0, payload, text


def cmd_init_db(request: CommandRequest, settings: Settings) -> Outcome:
    """初始化数据库命令"""
    from database.manager import RunLedger
    RunLedger.from_settings(settings)
    return 0, {'command': 'init-db', 'database': settings.database_url}, None


def cmd_history(request: CommandRequest, settings: Settings) -> Outcome:
    """运行记录命令"""
    from database.manager import RunLedger
    runs = RunLedger.from_settings(settings).recent_runs(request.options.get('limit', 20))
    return 0, {'command': 'history', 'runs': runs}, None


HANDLERS = {
    'gen': cmd_gen,
    'l2': cmd_l2,
    'star': cmd_star,
    'lp-mc': cmd_lp_mc,
    'haar': cmd_haar,
    'verify': cmd_verify,
    'sweep': cmd_sweep,
    'search-shift': cmd_search_shift,
    'counterexample': cmd_counterexample,
    'init-db': cmd_init_db,
    'history': cmd_history,
}


def _record(request: CommandRequest, settings: Settings, payload: Dict[str, Any], exit_code: int,
            error: Optional[str], suites=None):
    from database.manager import RunLedger
    from utils.serialization import format_fraction
    value = payload.get('value')
    if isinstance(value, Fraction):
        value = format_fraction(value)
    RunLedger.from_settings(settings).record_run(
        command=request.subcommand,
        spec=payload.get('spec'),
        method=payload.get('method'),
        value=None if value is None else str(value),
        success=exit_code == 0,
        error=error,
        suites=suites,
    )


def run(request: CommandRequest, settings: Optional[Settings] = None) -> CommandResult:
    """
    执行一条命令

    Args:
        request: 命令请求
        settings: 运行配置，缺省从环境读取
    Returns:
        CommandResult：0成功，1参数错误，2验证不通过
    """
    settings = settings or load_settings()
    handler = HANDLERS.get(request.subcommand)
    if handler is None:
        return CommandResult(exit_code=1, document='', error=f"unknown subcommand: {request.subcommand}")
    try:
        exit_code, payload, text = handler(request, settings)
    except NetError as e:
        logger.error(f"{request.subcommand} failed: {e}")
        if request.options.get('record'):
            _record(request, settings, {}, 1, str(e))
        return CommandResult(exit_code=1, document='', error=str(e))
    except OSError as e:
        logger.error(f"{request.subcommand} failed: {e}")
        return CommandResult(exit_code=1, document='', error=str(e))

    suites = payload.pop('_suites', None)
    if request.options.get('record'):
        _record(request, settings, payload, exit_code, None, suites)
    document = text if text is not None else to_document(payload) + '\n'
    return CommandResult(exit_code=exit_code, document=document)


def main(argv: Optional[List[str]] = None):
    """主函数"""
    parser = setup_argument_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help(sys.stderr)
        sys.exit(1)

    settings = load_settings()
    logging.basicConfig(
        level=getattr(logging, (args.log_level or settings.log_level).upper(), logging.WARNING),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )

    result = run(request_from_args(args), settings)
    if result.error:
        sys.stderr.write(f"✗ {result.error}\n")
    if result.document:
        if args.out:
            with open(args.out, 'w', encoding='utf-8') as f:
                f.write(result.document)
        else:
            sys.stdout.write(result.document)
    sys.exit(result.exit_code)


if __name__ == "__main__":
    main()
