"""
Runner principal del laboratorio de series de Osgood-Hartogs
Subcomandos: series, capacity, paper
"""
import argparse
import json
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.config import DEFAULT_LEJA_POINTS, MAX_ORDER, SAMPLING_DENSITY, SCENARIOS
from src.models.paperlab import (
    Example31Spec,
    ScenarioInputs,
    gen_example31,
    gen_example32,
    gen_example33,
    gen_example33b,
    random_scenario_inputs,
    run_scenario,
)
from src.models.potential import (
    bernstein_audit,
    bernstein_constant,
    leja_points,
    small_sup_monic,
    transfinite_diameter,
)
from src.models.series import Series1, WeightPair
from src.models.transforms import (
    anisotropic_substitute,
    compose,
    d_table,
    nth_root,
    reversion,
    rotate2,
    slices,
)
from src.utils import sampling
from src.utils.data_loader import (
    DataLoader,
    dump_json,
    instance_to_json,
    load_sample_set,
    load_series,
    save_json,
    series_to_json,
)
from src.utils.experiment_config import OUTPUT_FORMATS, ExperimentConfig

GLOBAL_OPTIONS = ('seed', 'order', 'format', 'out', 'config', 'workers', 'group', 'action', 'handler')


def parse_complex(text: str) -> complex:
    """Acepta 2, -1.5, 2+0i, 1-3j"""
    try:
        return complex(text.strip().replace(' ', '').replace('i', 'j'))
    except ValueError as exc:
        raise ValueError(f"Número complejo inválido: {text!r}") from exc


def parse_complex_list(text: str) -> List[complex]:
    return [parse_complex(part) for part in text.split(',') if part.strip()]


# ---------------------------------------------------------------
# Salida
# ---------------------------------------------------------------

def series_frame(series) -> pd.DataFrame:
    if isinstance(series, Series1):
        idx = np.flatnonzero(series.coeffs)
        return pd.DataFrame({'i': idx, 're': series.coeffs[idx].real, 'im': series.coeffs[idx].imag})
    rows = [{'i': i, 'j': j, 're': c.real, 'im': c.imag} for i, j, c in series.terms()]
    return pd.DataFrame(rows, columns=['i', 'j', 're', 'im'])


def render(header: Dict, result: Dict, table: Optional[pd.DataFrame], fmt: str) -> str:
    """
    Documento del reporte: cabecera con la configuración resuelta + resultado

    En CSV la cabecera va en una línea de comentario y el cuerpo es la tabla.
    """
    if fmt == 'json':
        return dump_json({'header': header, 'result': result}) + "\n"
    if table is None:
        raise ValueError("Este comando no produce una tabla; usa --format json")
    comment = "# " + dump_json(header, indent=None)
    return comment + "\n" + table.to_csv(index=False)


def emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"✅ Reporte guardado en: {path}")


# ---------------------------------------------------------------
# Entradas
# ---------------------------------------------------------------

def _require_path(value: Optional[str], flag: str) -> str:
    if value is None:
        raise ValueError(f"Falta el argumento {flag}")
    return value


def _weights(args) -> WeightPair:
    return WeightPair(args.sigma, args.tau)


def load_set(args):
    """Conjunto desde --E (archivo JSON) o desde --shape con sus parámetros"""
    if getattr(args, 'E', None):
        return load_sample_set(args.E)
    shape = args.shape
    if shape == 'circle':
        return sampling.circle(args.radius, density=args.density, count=args.count)
    if shape == 'disk':
        return sampling.disk(args.radius, density=args.density)
    if shape == 'segment':
        return sampling.segment(parse_complex(args.a), parse_complex(args.b),
                                density=args.density, count=args.count)
    if shape == 'annulus':
        return sampling.annulus(args.r0, args.radius, density=args.density)
    if shape == 'points':
        return sampling.finite(parse_complex_list(_require_path(args.points, '--points')))
    raise ValueError("Indica --E <archivo> o --shape")


# ---------------------------------------------------------------
# series
# ---------------------------------------------------------------

def cmd_series(args, cfg: ExperimentConfig) -> Tuple[Dict, Optional[pd.DataFrame], Dict[str, Dict]]:
    """Operaciones de series-core sobre archivos JSON de series"""
    action = args.action
    extra: Dict[str, Dict] = {}
    if action == 'compose':
        result = compose(load_series(_require_path(args.g, '--g')), load_series(_require_path(args.h, '--h')))
    elif action == 'substitute':
        result = anisotropic_substitute(load_series(_require_path(args.g, '--g')),
                                        load_series(_require_path(args.h, '--h')),
                                        _weights(args), parse_complex(args.s))
    elif action == 'revert':
        result = reversion(load_series(_require_path(args.u, '--u')))
    elif action == 'root':
        result = nth_root(load_series(_require_path(args.w, '--w')), args.nu)
    elif action == 'rotate':
        result = rotate2(load_series(_require_path(args.f, '--f')), args.theta)
    elif action == 'slice':
        decomposition = slices(load_series(_require_path(args.g, '--g')), _weights(args))
        body = {}
        frames = []
        for q in decomposition.qs:
            piece = decomposition[q]
            if piece.series.is_zero():
                continue
            body[str(q)] = {
                'q': q,
                'omega': piece.omega,
                'anchor': list(piece.anchor),
                'series': series_to_json(piece.series),
                'psi': series_to_json(piece.psi),
            }
            extra[f"q{q}"] = series_to_json(piece.series)
            frames.append(series_frame(piece.series).assign(q=q))
        table = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=['i', 'j', 're', 'im', 'q'])
        return {'weights': list(_weights(args).as_tuple()), 'slices': body}, table, extra
    elif action == 'dtable':
        table = d_table(load_series(_require_path(args.g, '--g')), load_series(_require_path(args.h, '--h')),
                        _weights(args))
        frame = table.to_frame()
        return {'weights': list(table.weights.as_tuple()), 'order': table.order, 'qmin': table.qmin,
                'qmax': table.qmax, 'entries': frame.to_dict('records')}, frame, extra
    else:
        raise ValueError(f"Subcomando desconocido: series {action}")
    return {'series': series_to_json(result)}, series_frame(result), extra


# ---------------------------------------------------------------
# capacity
# ---------------------------------------------------------------

def cmd_capacity(args, cfg: ExperimentConfig) -> Tuple[Dict, pd.DataFrame, Dict[str, Dict]]:
    """Leja, diámetro transfinito, constante de Bernstein y polinomio mónico"""
    E = load_set(args)
    action = args.action
    if action == 'leja':
        start = parse_complex(args.start) if args.start else None
        leja = leja_points(E, args.n, start=start)
        frame = leja.to_frame()
        return {'set': E.label, 'n': args.n, 'points': frame.to_dict('records')}, frame, {}
    if action == 'diameter':
        estimate = transfinite_diameter(E, args.n)
        return {
            'set': E.label,
            'n': estimate.n,
            'd_n': estimate.d_n,
            'capacity': estimate.capacity,
            'finite': estimate.finite,
            'decreasing': estimate.is_decreasing(),
            'sequence': estimate.sequence.to_dict('records'),
        }, estimate.sequence, {}
    if action == 'bernstein':
        C = args.C if args.C is not None else bernstein_constant(E, args.R)
        audit = bernstein_audit(E, C, count=args.polys, max_degree=args.max_degree, seed=cfg.seed)
        return {
            'set': E.label,
            'R': args.R,
            'C': C,
            'max_margin': float(audit['margin'].max()),
            'violations': int((~audit['holds']).sum()),
        }, audit, {}
    if action == 'monic':
        poly = small_sup_monic(E, args.n)
        frame = pd.DataFrame({'k': np.arange(len(poly.coeffs)), 're': poly.coeffs.real, 'im': poly.coeffs.imag})
        return {
            'set': E.label,
            'degree': poly.degree,
            'sup': poly.sup,
            'sup_root': poly.sup_root,
            'roots': [[float(r.real), float(r.imag)] for r in poly.roots],
            'coeffs': frame.to_dict('records'),
        }, frame, {}
    raise ValueError(f"Subcomando desconocido: capacity {action}")


# ---------------------------------------------------------------
# paper
# ---------------------------------------------------------------

def _series_order(cfg: ExperimentConfig) -> int:
    if cfg.order > MAX_ORDER:
        raise ValueError(f"Orden {cfg.order} mayor que el máximo en doble precisión ({MAX_ORDER})")
    return cfg.order


def _scenario_inputs(name: str, args, cfg: ExperimentConfig) -> ScenarioInputs:
    """Entradas del escenario: fixture (cor15), aleatorias convergentes, o archivos indicados"""
    if name == 'cor15' and not (args.g or args.h or args.E):
        loader = DataLoader()
        base = ScenarioInputs(g=loader.get_series('cor15_g'), h=loader.get_series('cor15_h'),
                              E=loader.get_sample_set('cor15_E'))
    else:
        base = random_scenario_inputs(name, cfg.seed, _series_order(cfg))
    if args.g:
        base.g = load_series(args.g)
    if args.h:
        base.h = load_series(args.h)
    if args.E:
        base.E = load_sample_set(args.E)
    if args.sigma is not None or args.tau is not None:
        current = base.weights or WeightPair(1, 1)
        base.weights = WeightPair(current.sigma if args.sigma is None else args.sigma,
                                  current.tau if args.tau is None else args.tau)
    return base


def cmd_paper(args, cfg: ExperimentConfig) -> Tuple[Dict, pd.DataFrame, Dict[str, Dict]]:
    """Generadores de contraejemplos y escenarios de los teoremas"""
    action = args.action
    if action in ('example31', 'example32', 'example33', 'example33b'):
        if action == 'example31':
            instance = gen_example31(Example31Spec(E=sampling.finite(parse_complex_list(args.points or '1,-1')),
                                                   order=cfg.order))
        elif action == 'example32':
            instance = gen_example32(args.k, args.sigma or 1, order=_series_order(cfg), seed=cfg.seed)
        elif action == 'example33':
            w = WeightPair(args.sigma if args.sigma is not None else 1, args.tau if args.tau is not None else -1)
            u = load_series(args.u) if args.u else None
            instance = gen_example33(w, u, order=_series_order(cfg), seed=cfg.seed)
        else:
            h = load_series(args.h) if args.h else None
            instance = gen_example33b(h, order=_series_order(cfg), seed=cfg.seed)
        payload = instance_to_json(instance)
        ledger = instance.g_ledger
        frame = pd.DataFrame({'n': np.arange(ledger.order + 1), 'L_n': ledger.levels})
        return payload, frame, {}

    report = run_scenario(action, _scenario_inputs(action, args, cfg), n_workers=cfg.workers,
                          thresholds=cfg.thresholds)
    return report.to_dict(), report.table, {}


# ---------------------------------------------------------------
# Parser
# ---------------------------------------------------------------

def _add_global(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--seed', type=int, default=None, help='Semilla (por defecto 0)')
    parser.add_argument('--order', type=int, default=None, help='Orden de truncación')
    parser.add_argument('--format', choices=OUTPUT_FORMATS, default=None, help='Formato del reporte')
    parser.add_argument('--out', default=None, help='Archivo de salida (por defecto stdout)')
    parser.add_argument('--config', default=None, help='Archivo JSON de configuración')
    parser.add_argument('--workers', type=int, default=None, help='Hilos para los barridos')


def _add_weights(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument('--sigma', type=int, required=required, default=None)
    parser.add_argument('--tau', type=int, required=required, default=None)


def _add_set(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--E', default=None, help='Conjunto muestreado (JSON)')
    parser.add_argument('--shape', choices=['circle', 'disk', 'segment', 'annulus', 'points'], default=None)
    parser.add_argument('--radius', type=float, default=1.0)
    parser.add_argument('--r0', type=float, default=0.5)
    parser.add_argument('--a', default='-1')
    parser.add_argument('--b', default='1')
    parser.add_argument('--points', default=None, help='Puntos separados por comas (shape=points)')
    parser.add_argument('--count', type=int, default=None)
    parser.add_argument('--density', type=float, default=SAMPLING_DENSITY)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Laboratorio de series de Osgood-Hartogs",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Ejemplos de uso:
  python main.py series substitute --g g.json --h h.json --sigma 1 --tau 1 --s 2+0i
  python main.py series slice --g g.json --sigma 1 --tau 2 --out slices.json
  python main.py capacity diameter --shape circle --n 16
  python main.py capacity bernstein --shape segment --a -2 --b 2 --R 3
  python main.py paper example31 --points 1,-1 --order 200
  python main.py paper cor15
        """
    )
    groups = parser.add_subparsers(dest='group', required=True)

    series = groups.add_parser('series', help='Operaciones sobre series formales')
    series_actions = series.add_subparsers(dest='action', required=True)
    p = series_actions.add_parser('compose', help='g(x, h(x))')
    p.add_argument('--g'); p.add_argument('--h')
    p = series_actions.add_parser('substitute', help='g(s^sigma x, s^tau h(x))')
    p.add_argument('--g'); p.add_argument('--h'); p.add_argument('--s', required=True)
    _add_weights(p)
    p = series_actions.add_parser('revert', help='Inversa composicional')
    p.add_argument('--u')
    p = series_actions.add_parser('root', help='Raíz nu-ésima de x^nu * unidad')
    p.add_argument('--w'); p.add_argument('--nu', type=int, required=True)
    p = series_actions.add_parser('rotate', help='Rotación f_theta')
    p.add_argument('--f'); p.add_argument('--theta', type=float, required=True)
    p = series_actions.add_parser('slice', help='Rebanadas cuasi-homogéneas g_q')
    p.add_argument('--g')
    _add_weights(p)
    p = series_actions.add_parser('dtable', help='Tabla d_pq')
    p.add_argument('--g'); p.add_argument('--h')
    _add_weights(p)
    for sub in series_actions.choices.values():
        _add_global(sub)
        sub.set_defaults(handler=cmd_series)

    capacity = groups.add_parser('capacity', help='Teoría del potencial sobre conjuntos muestreados')
    capacity_actions = capacity.add_subparsers(dest='action', required=True)
    p = capacity_actions.add_parser('leja', help='Puntos de Leja')
    p.add_argument('--n', type=int, required=True); p.add_argument('--start', default=None)
    p = capacity_actions.add_parser('diameter', help='Diámetro transfinito')
    p.add_argument('--n', type=int, default=DEFAULT_LEJA_POINTS)
    p = capacity_actions.add_parser('bernstein', help='Constante de Bernstein y auditoría')
    p.add_argument('--R', type=float, required=True)
    p.add_argument('--C', type=float, default=None, help='Constante a auditar (por defecto la calculada)')
    p.add_argument('--polys', type=int, default=100)
    p.add_argument('--max-degree', dest='max_degree', type=int, default=12)
    p = capacity_actions.add_parser('monic', help='Polinomio mónico de sup pequeño')
    p.add_argument('--n', type=int, required=True)
    for sub in capacity_actions.choices.values():
        _add_set(sub)
        _add_global(sub)
        sub.set_defaults(handler=cmd_capacity)

    paper = groups.add_parser('paper', help='Contraejemplos y escenarios')
    paper_actions = paper.add_subparsers(dest='action', required=True)
    p = paper_actions.add_parser('example31', help='Serie divergente con restricciones acotadas')
    p.add_argument('--points', '--E', dest='points', default='1,-1', help='Conjunto finito E')
    p = paper_actions.add_parser('example32', help='phi(x^k) - phi(y)')
    p.add_argument('--k', type=int, default=2)
    _add_weights(p, required=False)
    p = paper_actions.add_parser('example33', help='phi(x^|tau| y^sigma)')
    p.add_argument('--u', default=None)
    _add_weights(p, required=False)
    p = paper_actions.add_parser('example33b', help='Caso (0, 1)')
    p.add_argument('--h', default=None)
    for name in SCENARIOS:
        p = paper_actions.add_parser(name, help=f'Escenario {name}')
        p.add_argument('--g', default=None); p.add_argument('--h', default=None)
        p.add_argument('--E', default=None)
        _add_weights(p, required=False)
    for sub in paper_actions.choices.values():
        _add_global(sub)
        sub.set_defaults(handler=cmd_paper)
    return parser


def _command_params(args) -> Dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in GLOBAL_OPTIONS}


def run(args) -> None:
    cfg = ExperimentConfig.from_sources(args.config, {
        'seed': args.seed, 'order': args.order, 'format': args.format,
        'out': args.out, 'workers': args.workers,
    })
    handler: Callable = args.handler
    result, table, extra = handler(args, cfg)
    header = {
        'command': f"{args.group} {args.action}",
        'config': cfg.to_dict(),
        'params': _command_params(args),
    }
    emit(render(header, result, table, cfg.format), cfg.out)
    if extra and cfg.out:
        out = Path(cfg.out)
        for key, payload in extra.items():
            save_json(payload, out.with_name(f"{out.stem}_{key}.json"))


def main(argv: Optional[List[str]] = None) -> int:
    """Punto de entrada; devuelve el código de salida"""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        run(args)
    except json.JSONDecodeError as exc:
        print(f"❌ JSON inválido: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"❌ Error de E/S: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
