#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Linha de comando do laboratório de Loewner.

Cada subcomando orquestra um módulo da biblioteca e grava um artefato
(CSV, JSON ou SVG) com bloco de metadados. Códigos de saída: 0 sucesso,
2 erro de domínio, 3 falha de qualidade ou verificação, 64 uso inválido.
"""
import argparse
import cmath
import logging
import os
import re
import sys
from fractions import Fraction

# Adiciona o diretório do backend ao path para encontrar os módulos
sys.path.insert(0, os.path.abspath(os.path.dirname(__file__)))

from modules import __version__  # noqa: E402
from modules.analysis.exact_spectra import exact_beta, red_parabola  # noqa: E402
from modules.analysis.lle_spectra import beta_4mq, integral_means_slope, solve_4mq  # noqa: E402
from modules.analysis.phase_diagram import phase_diagram  # noqa: E402
from modules.analysis.spectrum_types import SleParams  # noqa: E402
from modules.analysis.spiral_maps import spiral_integral_means, spiral_spectrum_complete  # noqa: E402
from modules.core.config import ConfigManager  # noqa: E402
from modules.core.errors import DomainError, LoewnerError, VerificationError  # noqa: E402
from modules.core.statistics import fit_loglog_slope  # noqa: E402
from modules.core.utils import (  # noqa: E402
    fraction_to_string,
    get_logger,
    parse_rational,
    resolve_threads,
    setup_logging,
    write_csv,
    write_json,
)
from modules.processors.moment_estimator import MomentEstimator  # noqa: E402
from modules.simulation.levy_driving import (  # noqa: E402
    BrownianPlusOddPiJumps,
    DriftedBrownian,
    SymmetricStable,
    sample_path,
    symbol_for_pair,
)
from modules.simulation.loewner_sim import default_horizon  # noqa: E402
from modules.verification.lle_fuchsian import (  # noqa: E402
    build_recursion_mq,
    ellipse_rational_points,
    falsify_alternative_condition,
    fuchsian_classification,
    verify_closure_points,
)
from modules.verification.pde_verify import CandidateG, abc_coefficients, residual_report  # noqa: E402
from modules.visualization.phase_plot import save_phase_diagram_svg  # noqa: E402

logger = get_logger('cli')

EXIT_OK = 0
EXIT_USAGE = 64


class UsageError(Exception):
    """Flags malformadas ou ausentes."""


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # Aceita valores como -2/5 e -1.5-0.75j como argumentos, não como opções
        self._negative_number_matcher = re.compile(r"^-\.?\d")

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _number(text):
    """Racional exato ('a/b', inteiro, decimal) ou complexo ('1.5-0.75j')."""
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return complex(str(text).replace('i', 'j').replace(' ', ''))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Número inválido: {text}")


def _rational(text):
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"Racional inválido: {text}")


def _radii(text):
    try:
        return [float(value) for value in text.split(',') if value.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Lista de raios inválida: {text}")


def _real(value, name):
    value = complex(value) if not isinstance(value, Fraction) else value
    if isinstance(value, complex):
        if value.imag:
            raise DomainError(f"{name} deve ser real, recebido {value}")
        return float(value.real)
    return float(value)


def _complex(value):
    return complex(float(value)) if isinstance(value, Fraction) else complex(value)


def _add_process_arguments(parser):
    group = parser.add_argument_group('processo condutor')
    group.add_argument('--process', choices=['brownian', 'stable', 'jumps', 'pair'], default='brownian',
                       help='Processo de Lévy do condutor')
    group.add_argument('--kappa', type=float, default=2.0, help='Coeficiente browniano')
    group.add_argument('--drift', '-a', type=float, default=0.0, help='Deriva a')
    group.add_argument('--stable-alpha', type=float, default=1.5, help='Índice do processo estável')
    group.add_argument('--rate', type=float, default=0.0, help='Intensidade dos saltos +-pi')
    group.add_argument('--eta1', type=float, help='eta(1) do processo (com --process pair)')
    group.add_argument('--eta2', type=float, help='eta(2) do processo (com --process pair)')


def _add_sampling_arguments(parser):
    parser.add_argument('--p', type=_number, required=True, help='Expoente p')
    parser.add_argument('--q', type=_number, required=True, help='Expoente q')
    parser.add_argument('--n', type=int, default=1000, help='Número de amostras')
    parser.add_argument('--T', type=float, help='Horizonte (padrão pela regra logarítmica)')
    parser.add_argument('--dt', type=float, help='Passo do condutor')


def build_parser():
    """
    Monta o parser de argumentos com todos os subcomandos.

    Returns:
        argparse.ArgumentParser: Parser configurado
    """
    parser = _Parser(prog='loewner', description='Laboratório de evoluções de Loewner no plano inteiro.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('-c', '--config', help='Arquivo de configuração')
    parser.add_argument('-o', '--out', help='Arquivo de saída')
    parser.add_argument('--seed', type=int, default=0, help='Semente mestre de 64 bits')
    parser.add_argument('--threads', type=int, help='Número máximo de threads')
    parser.add_argument('--quiet', action='store_true', help='Somente avisos e erros, sem barra de progresso')
    parser.add_argument('--verbose', action='store_true', help='Log em nível DEBUG')
    subparsers = parser.add_subparsers(dest='command', metavar='subcomando')
    subparsers.required = True

    exact = subparsers.add_parser('exact-beta', help='Espectro exato beta(p, q)')
    exact.add_argument('--p', type=_number, required=True, help='Expoente p')
    exact.add_argument('--q', type=_number, required=True, help='Expoente q')
    exact.add_argument('--case', choices=['sle', 'spiral', 'lle'], default='sle', help='Família do espectro')
    exact.add_argument('--kappa', type=float, default=0.0, help='kappa (0 delega à meia espiral)')
    exact.add_argument('--drift', '-a', type=float, default=0.0, help='Deriva a')
    exact.add_argument('--eta1', type=_number, help='eta(1) do caso LLE')
    exact.add_argument('--eta2', type=_number, help='eta(2) do caso LLE (4-q ou -q)')

    estimate = subparsers.add_parser('estimate-beta', help='Estimativa Monte Carlo de beta(p, q)')
    _add_process_arguments(estimate)
    _add_sampling_arguments(estimate)
    estimate.add_argument('--radii', type=_radii, default=[0.5, 0.7, 0.8, 0.9, 0.93, 0.95],
                          help='Raios separados por vírgula')

    moment = subparsers.add_parser('moment', help="Momento pontual E|f'(z)^p (z/f(z))^q|")
    _add_process_arguments(moment)
    _add_sampling_arguments(moment)
    moment.add_argument('--z', type=_number, required=True, help='Ponto no disco aberto')

    phase = subparsers.add_parser('phase-diagram', help='Curvas de transição de fase (CSV/JSON e SVG)')
    phase.add_argument('--kappa', type=float, required=True, help='kappa > 0')
    phase.add_argument('--drift', '-a', type=float, default=0.0, help='Deriva a')
    phase.add_argument('--p-min', type=float, default=-6.0, help='Menor p')
    phase.add_argument('--p-max', type=float, default=6.0, help='Maior p')
    phase.add_argument('--resolution', type=int, default=200, help='Pontos por segmento')
    phase.add_argument('--format', choices=['csv', 'json'], default='csv', help='Formato das curvas')
    phase.add_argument('--no-svg', action='store_true', help='Não gera o SVG')

    pde = subparsers.add_parser('verify-pde', help='Resíduo de P(D)G em uma grade')
    pde.add_argument('--alpha', type=_number, required=True, help='Parâmetro complexo da parábola vermelha')
    pde.add_argument('--kappa', type=float, required=True, help='kappa > 0')
    pde.add_argument('--drift', '-a', type=float, default=0.0, help='Deriva a')
    pde.add_argument('--grid', type=int, default=10, help='Pontos por eixo da grade')
    pde.add_argument('--radius', type=float, default=0.8, help='Raio dos pontos da grade')
    pde.add_argument('--tolerance', type=float, default=1e-10, help='Resíduo relativo máximo aceito')

    lle = subparsers.add_parser('verify-lle', help='Verificações exatas das soluções LLE')
    lle.add_argument('--case', choices=['4mq', 'mq', 'closure', 'falsify'], required=True, help='Caso')
    lle.add_argument('--n', type=int, default=1, help='Grau de fechamento')
    lle.add_argument('--q', type=_rational, help='Expoente q (racional a/b)')
    lle.add_argument('--eta1', type=_rational, help='eta(1) (racional a/b)')
    lle.add_argument('--points', type=int, help='closure: verifica este número de pontos racionais de E_n')

    spiral = subparsers.add_parser('spiral-means', help='Médias integrais da espiral determinística')
    spiral.add_argument('--p', type=_number, required=True, help='Expoente p')
    spiral.add_argument('--q', type=_number, required=True, help='Expoente q')
    spiral.add_argument('--drift', '-a', type=float, default=1.0, help='Deriva a')
    spiral.add_argument('--radii', type=_radii, default=[0.9, 0.95, 0.98, 0.99, 0.995, 0.999],
                        help='Raios separados por vírgula')

    driver = subparsers.add_parser('sample-driver', help='Amostra um caminho do condutor')
    _add_process_arguments(driver)
    driver.add_argument('--T', type=float, default=10.0, help='Horizonte')
    driver.add_argument('--dt', type=float, default=0.01, help='Passo')
    driver.add_argument('--theta0', type=float, default=0.0, help='Rotação inicial')

    return parser


def _symbol(args):
    if args.process == 'brownian':
        return DriftedBrownian(kappa=args.kappa, a=args.drift)
    if args.process == 'stable':
        return SymmetricStable(alpha=args.stable_alpha)
    if args.process == 'jumps':
        return BrownianPlusOddPiJumps(kappa=args.kappa, rate=args.rate)
    if args.eta1 is None or args.eta2 is None:
        raise DomainError("--process pair requer --eta1 e --eta2")
    return symbol_for_pair(args.eta1, args.eta2)


def _output_path(args, config, default_name):
    return args.out or os.path.join(config['output_dir'], default_name)


def _check_written(result):
    success, message = result
    if not success:
        raise LoewnerError(message)
    logger.info("Arquivo gravado: %s", message)
    return message


def _report(args, payload, metadata):
    """Grava o relatório JSON quando --out é dado."""
    if args.out:
        _check_written(write_json(args.out, payload, metadata))


def cmd_exact_beta(args, config):
    p, q = args.p, args.q
    metadata = {'command': 'exact-beta', 'case': args.case, 'p': _complex(p), 'q': _complex(q)}
    if args.case == 'lle':
        if args.eta1 is None or args.eta2 is None:
            raise DomainError("--case lle requer --eta1 e --eta2")
        if _real(p, 'p') != 2.0:
            raise DomainError("Os espectros LLE exatos são conhecidos apenas em p = 2")
        q_value, eta1, eta2 = _real(q, 'q'), _real(args.eta1, 'eta1'), _real(args.eta2, 'eta2')
        if abs(eta2 - (4.0 - q_value)) < 1e-12:
            beta = beta_4mq(q_value, eta1)
            payload = {'beta': beta, 'branch': 'eta2_4mq'}
        elif abs(eta2 + q_value) < 1e-12:
            exact_q = q if isinstance(q, Fraction) else Fraction(q_value)
            exact_eta1 = args.eta1 if isinstance(args.eta1, Fraction) else Fraction(eta1)
            classification = fuchsian_classification(exact_q, exact_eta1)
            beta = classification.beta
            payload = {'beta': beta, 'branch': 'eta2_mq', 'alpha': str(classification.alpha_plus)}
        else:
            raise DomainError(f"eta2={eta2} não é 4-q nem -q para q={q_value}")
        metadata.update({'eta1': eta1, 'eta2': eta2})
    elif args.case == 'spiral':
        result = spiral_spectrum_complete(_complex(p), _complex(q), args.drift)
        beta, payload = result.beta, result.to_dict()
        metadata['a'] = args.drift
    else:
        params = SleParams(kappa=args.kappa, a=args.drift)
        p_value, q_value = (_complex(p), _complex(q)) if args.kappa == 0 else (_real(p, 'p'), _real(q, 'q'))
        result = exact_beta(p_value, q_value, params)
        beta, payload = result.beta, result.to_dict()
        metadata.update({'kappa': args.kappa, 'a': args.drift})
    print(f"beta={beta:.15g}")
    _report(args, payload, metadata)
    return EXIT_OK


def cmd_estimate_beta(args, config):
    symbol = _symbol(args)
    estimator = MomentEstimator(config)
    result = estimator.estimate_beta(
        symbol, _complex(args.p), _complex(args.q), args.radii, args.n,
        T=args.T, dt=args.dt, seed=args.seed, num_workers=args.threads,
    )
    estimate = result.estimate
    estimate.metadata.update({'command': 'estimate-beta', 'ci': list(result.ci), 'n_fit_points': result.n_fit_points})
    path = _check_written(estimate.to_csv(_output_path(args, config, 'estimate_beta.csv')))
    print(f"beta_hat={result.beta_hat:.6f} ic95=[{result.ci[0]:.6f}, {result.ci[1]:.6f}] arquivo={path}")
    return EXIT_OK


def cmd_moment(args, config):
    symbol = _symbol(args)
    z = _complex(args.z)
    estimator = MomentEstimator(config)
    T = args.T if args.T is not None else default_horizon(abs(z), config)
    dt = args.dt if args.dt is not None else config['dt']
    estimate = estimator.estimate_moment_pointwise(
        symbol, _complex(args.p), _complex(args.q), z, args.n,
        T=T, dt=dt, seed=args.seed, num_workers=args.threads,
    )
    metadata = {
        'command': 'moment', 'symbol': symbol.to_dict(), 'p': _complex(args.p), 'q': _complex(args.q),
        'z': z, 'n': estimate.n_samples, 'T': T, 'dt': dt, 'seed': args.seed,
    }
    payload = {
        'mean': estimate.mean,
        'stderr': estimate.stderr,
        'n_samples': estimate.n_samples,
        'n_discarded': estimate.n_discarded,
    }
    print(f"mean={estimate.mean:.8g} stderr={estimate.stderr:.3g} n={estimate.n_samples}")
    _report(args, payload, metadata)
    return EXIT_OK


def cmd_phase_diagram(args, config):
    params = SleParams(kappa=args.kappa, a=args.drift)
    diagram = phase_diagram(params, (args.p_min, args.p_max), args.resolution, config)
    default_name = f'phase_diagram.{args.format}'
    path = _output_path(args, config, default_name)
    writer = diagram.to_csv if args.format == 'csv' else diagram.to_json
    _check_written(writer(path))
    if not args.no_svg:
        _check_written(save_phase_diagram_svg(diagram, os.path.splitext(path)[0] + '.svg'))
    print(f"curvas={len(diagram.curves)} falhas={len(diagram.failures)} arquivo={path}")
    return EXIT_OK


def _grid_points(size, radius):
    # Ângulos deslocados evitam z1 = conj(w) sobre o eixo real
    first = [radius * cmath.exp(2j * cmath.pi * (j + 0.5) / size) for j in range(size)]
    second = [radius * cmath.exp(-2j * cmath.pi * (k + 0.25) / size) for k in range(size)]
    return [(z1, w) for z1 in first for w in second]


def cmd_verify_pde(args, config):
    params = SleParams(kappa=args.kappa, a=args.drift)
    alpha = _complex(args.alpha)
    point = red_parabola(alpha, params)
    A, B, C = abc_coefficients(alpha, point.p, point.q, params)
    candidate = CandidateG(alpha=alpha, kappa=args.kappa, a=args.drift)
    report = residual_report(candidate, point.p, point.q, params, _grid_points(args.grid, args.radius), config)
    report['abc_sum'] = abs(A + B + C)
    metadata = {'command': 'verify-pde', 'grid': args.grid, 'radius': args.radius, 'tolerance': args.tolerance}
    _report(args, report, metadata)
    print(f"max_residual={report['max_relative_residual']:.3e} abc_sum={report['abc_sum']:.3e}")
    if report['max_relative_residual'] > args.tolerance:
        raise VerificationError(
            f"Resíduo relativo {report['max_relative_residual']:.3e} acima da tolerância {args.tolerance:.1e}"
        )
    return EXIT_OK


def _closure_points(args):
    if args.points is None:
        if args.q is None or args.eta1 is None:
            raise DomainError("--case closure requer --q e --eta1, ou --points")
        return [(args.q, args.eta1)]
    if args.points < 1:
        raise DomainError(f"--points={args.points} deve ser >= 1")
    points = ellipse_rational_points(args.n, args.points)
    if not points:
        raise DomainError(f"Nenhum ponto racional de E_{args.n} em D_(-q)")
    if len(points) < args.points:
        logger.warning("Apenas %d ponto(s) racionais de E_%d gerados", len(points), args.n)
    return points


def cmd_verify_lle(args, config):
    metadata = {'command': 'verify-lle', 'case': args.case, 'n': args.n, 'q': args.q, 'eta1': args.eta1}
    if args.case == 'closure':
        points = _closure_points(args)
        verdicts = verify_closure_points(args.n, points, num_workers=args.threads)
        if len(verdicts) == 1:
            payload = verdicts[0].to_dict()
        else:
            payload = {'case': 'closure', 'n': args.n, 'closed': all(v.closed for v in verdicts),
                       'points': [verdict.to_dict() for verdict in verdicts]}
        _report(args, payload, metadata)
        for verdict in verdicts:
            print(f"closed={str(verdict.closed).lower()}, beta={verdict.state.alpha}")
        failed = [verdict for verdict in verdicts if not verdict.closed]
        if failed:
            state = failed[0].state
            raise VerificationError(
                f"Fechamento falhou em E_{args.n}, ponto ({fraction_to_string(state.q)}, {fraction_to_string(state.eta1)})"
            )
        return EXIT_OK

    if args.q is None:
        raise DomainError(f"--case {args.case} requer --q")
    if args.case == 'falsify':
        result = falsify_alternative_condition(args.n, args.q)
        payload = result.to_dict()
        _report(args, payload, metadata)
        print(f"witness={result.witness} no_further_solution={str(result.no_further_solution).lower()}")
        if not result.no_further_solution:
            raise VerificationError(f"Testemunha nula em n={args.n}, q={fraction_to_string(args.q)}")
        return EXIT_OK

    if args.eta1 is None:
        raise DomainError(f"--case {args.case} requer --eta1")
    if args.case == '4mq':
        solution = solve_4mq(float(args.q), float(args.eta1), config)
        payload = solution.to_dict()
        payload['fitted_slope'] = integral_means_slope(solution.table).slope
        _report(args, payload, metadata)
        print(f"beta={solution.beta:.15g} fitted_slope={payload['fitted_slope']:.6f}")
        return EXIT_OK
    if args.case == 'mq':
        state = build_recursion_mq(args.q, args.eta1, args.n)
        payload = state.to_dict()
        payload['fuchsian'] = fuchsian_classification(args.q, args.eta1).to_dict()
        _report(args, payload, metadata)
        print(f"alpha={state.alpha} closed={str(state.closed).lower()}")
        return EXIT_OK


def cmd_spiral_means(args, config):
    p, q = _complex(args.p), _complex(args.q)
    radii = sorted(args.radii)
    values = [spiral_integral_means(p, q, args.drift, r, config) for r in radii]
    fit = fit_loglog_slope([1.0 / (1.0 - r) for r in radii], values)
    exact = spiral_spectrum_complete(p, q, args.drift)
    metadata = {
        'command': 'spiral-means', 'p': p, 'q': q, 'a': args.drift,
        'fitted_slope': fit.slope, 'exact_beta': exact.beta,
    }
    path = _check_written(write_csv(_output_path(args, config, 'spiral_means.csv'), ['r', 'I'], zip(radii, values), metadata))
    print(f"fitted_slope={fit.slope:.6f} beta={exact.beta:.15g} arquivo={path}")
    return EXIT_OK


def cmd_sample_driver(args, config):
    symbol = _symbol(args)
    path = sample_path(symbol, args.T, args.dt, args.seed, args.theta0)
    metadata = {'command': 'sample-driver', 'symbol': symbol.to_dict(), 'T': args.T, 'n': 1}
    written = _check_written(path.to_csv(_output_path(args, config, 'driver.csv'), metadata))
    print(f"passos={path.n_steps} arquivo={written}")
    return EXIT_OK


COMMANDS = {
    'exact-beta': cmd_exact_beta,
    'estimate-beta': cmd_estimate_beta,
    'moment': cmd_moment,
    'phase-diagram': cmd_phase_diagram,
    'verify-pde': cmd_verify_pde,
    'verify-lle': cmd_verify_lle,
    'spiral-means': cmd_spiral_means,
    'sample-driver': cmd_sample_driver,
}


def run(argv=None):
    """
    Executa um subcomando e devolve o código de saída.

    Args:
        argv (list, optional): Argumentos (padrão: sys.argv[1:])

    Returns:
        int: 0 sucesso, 2 domínio, 3 qualidade/verificação, 64 uso inválido
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"Uso inválido: {e}", file=sys.stderr)
        return EXIT_USAGE

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    config_manager = ConfigManager(args.config)
    config = config_manager.update_config({'progress': not args.quiet})
    setup_logging(level, config.get('log_dir'))
    args.threads = resolve_threads(config, args.threads)
    logger.debug("Subcomando %s com %d thread(s)", args.command, args.threads)

    try:
        return COMMANDS[args.command](args, config)
    except LoewnerError as e:
        logger.error("%s: %s", type(e).__name__, e)
        print(f"Erro: {e}", file=sys.stderr)
        return e.exit_code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
