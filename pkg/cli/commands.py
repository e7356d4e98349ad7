"""Command implementations.

Each ``cmd_*`` takes the parsed arguments and the run report to fill in, and
returns True when it wrote CSV to standard output (the report then only goes
to ``--report``). Human-readable progress goes to standard error.
"""

import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from cleaning.ingest_report import IngestReport
from core.density import cdf_x, cdf_y, log_pdf, log_pdf_y, log_pmf_x, moments
from core.errors import BPGCError, DatasetIOError, DatasetParseError, InvalidGrid
from core.normalizer import log_normalizer
from core.params import GammaConditional, Params, make_observation, validate_params
from fit.barrier import MleConfig, fit_mle
from gof.ff import GofConfig, ff_test
from gof.pipeline import compare_fitted_to_truth, fitted_gof
from sample.exact import draw
from sample.rng import derive_seed

from .dataset_io import describe, read_dataset, write_dataset, write_frame
from .report import RunReport

SIMSTUDY_CASES: Dict[int, Tuple[float, ...]] = {
    1: (1.0, 1.0, 0.1, 1.0, 0.1),
    2: (1.0, 1.0, 1.0, 1.0, 1.0),
    3: (1.0, 5.0, 1.0, 5.0, 1.0),
    4: (5.0, 5.0, 5.0, 5.0, 5.0),
}

# Published estimates and descriptive measures of the hospital admissions data.
TEMPLATES = {
    'hospital': {
        'params': (2.1809, 0.1880, 0.0018, 2.4806, 0.0535),
        'reference': {
            'x': {'min': 2.0, 'q25': 8.0, 'median': 10.0, 'mean': 9.856, 'q75': 12.0, 'max': 20.0},
            'y': {'min': 0.821, 'q25': 8.25, 'median': 13.614, 'mean': 14.578, 'q75': 19.181, 'max': 53.671},
        },
    },
}

SUCCESS_SHARE = 0.9


def say(message: str):
    print(message, file=sys.stderr, flush=True)


def _load(path: str, report: RunReport):
    ingest = IngestReport()
    try:
        data = read_dataset(path, ingest)
    except DatasetParseError:
        report.results['ingest'] = {
            **ingest.get_summary(),
            'first_rejection': ingest.first_rejection,
            'rejections': ingest.rejections,
        }
        if ingest.rejections:
            say(f"❌ Refused {path}: {len(ingest.rejections)} rows rejected")
            say(ingest.generate_markdown())
        raise
    report.results['ingest'] = ingest.get_summary()
    say(f"📂 Loaded {data.n} observations from {path}")
    if ingest.coercions:
        say(f"   ⚠️ {ingest.get_summary()['values_coerced']} values coerced")
    return data


def parse_grid(text: str) -> Tuple[np.ndarray, np.ndarray]:
    """Parse ``x=LO..HI,y=LO..HI:COUNT`` into an integer x range and a y linspace."""
    parts = {}
    for piece in text.split(','):
        name, sep, body = piece.partition('=')
        if not sep or name.strip() not in ('x', 'y'):
            raise InvalidGrid(f"bad grid component {piece!r}; expected x=LO..HI or y=LO..HI:COUNT")
        parts[name.strip()] = body.strip()
    if set(parts) != {'x', 'y'}:
        raise InvalidGrid("grid needs both x and y ranges")

    def bounds(body: str):
        span, _, count = body.partition(':')
        lo, sep, hi = span.partition('..')
        if not sep:
            raise InvalidGrid(f"range {body!r} must look like LO..HI")
        try:
            return float(lo), float(hi), (int(count) if count else None)
        except ValueError:
            raise InvalidGrid(f"range {body!r} is not numeric")

    x_lo, x_hi, _ = bounds(parts['x'])
    y_lo, y_hi, y_count = bounds(parts['y'])
    y_count = y_count or 100
    if x_lo < 0 or x_lo != int(x_lo) or x_hi != int(x_hi) or x_hi < x_lo:
        raise InvalidGrid("x range must be non-negative integers with LO <= HI")
    if y_lo <= 0 or y_hi <= y_lo or y_count < 2:
        raise InvalidGrid("y range must satisfy 0 < LO < HI with COUNT >= 2")
    return np.arange(int(x_lo), int(x_hi) + 1), np.linspace(y_lo, y_hi, y_count)


def cmd_eval(args, report: RunReport) -> bool:
    params = validate_params(args.params)
    norm = log_normalizer(params, args.tol)
    report.inputs = {'params': params.as_dict(), 'tol': args.tol}
    report.results['normalizer'] = norm.as_dict()
    say(f"🧮 c = {norm.c:.15g} ({norm.terms_used} terms, tail bound {norm.tail_bound:.3g})")

    csv_on_stdout = False
    if args.grid:
        xs, ys = parse_grid(args.grid)
        xx, yy = np.meshgrid(xs, ys, indexing='ij')
        logf = log_pdf(params, xx.ravel(), yy.ravel(), norm)
        frame = pd.DataFrame({'x': xx.ravel(), 'y': yy.ravel(), 'density': np.exp(logf)})
        csv_on_stdout = args.out is None
        write_frame(frame, args.out, sys.stdout)
        dy = ys[1] - ys[0]
        report.inputs['grid'] = args.grid
        report.results['grid'] = {
            'rows': len(frame),
            'mass': float(frame['density'].sum() * dy),
            'x_cdf_at_max': float(cdf_x(params, int(xs[-1]), norm)),
            'out': args.out,
        }
        say(f"📈 Grid of {len(frame)} points, mass ≈ {report.results['grid']['mass']:.6g}")
    elif args.x is not None and args.y is not None:
        obs = make_observation(args.x, args.y)
        value = log_pdf(params, obs.x, obs.y, norm)
        report.inputs.update(x=obs.x, y=obs.y)
        report.results['log_pdf'] = value
        report.results['pdf'] = math.exp(value)
        say(f"📍 f({args.x}, {args.y}) = {math.exp(value):.15g}")
    elif args.x is not None:
        value = log_pmf_x(params, args.x, norm)
        report.inputs['x'] = args.x
        report.results['log_pmf_x'] = value
        report.results['cdf_x'] = cdf_x(params, args.x, norm)
        say(f"📍 f_X({args.x}) = {math.exp(value):.15g}")
    elif args.y is not None:
        value = log_pdf_y(params, args.y, norm)
        report.inputs['y'] = args.y
        report.results['log_pdf_y'] = value
        report.results['cdf_y'] = cdf_y(params, args.y, norm)
        say(f"📍 f_Y({args.y}) = {math.exp(value):.15g}")

    report.results['moments'] = moments(params, norm).as_dict()
    return csv_on_stdout


def cmd_sample(args, report: RunReport) -> bool:
    params = validate_params(args.params)
    report.seed = args.seed
    report.inputs = {'params': params.as_dict(), 'n': args.n, 'method': args.method}
    options = {}
    if args.method == 'gibbs':
        options = {'burn_in': args.burn_in, 'thin': args.thin, 'init_y': args.init_y}
    say(f"🎲 Drawing {args.n} observations ({args.method}) from {params}")
    batch = draw(params, args.n, args.seed, args.method, **options)
    write_dataset(batch.x, batch.y, args.out, sys.stdout)
    report.results = {
        'generator': batch.generator,
        'config': batch.config,
        'out': args.out,
        'summary': describe(batch.to_dataset()),
    }
    say(f"✅ Wrote {batch.n} rows to {args.out or 'standard output'}")
    return args.out is None


def cmd_fit(args, report: RunReport) -> bool:
    data = _load(args.data, report)
    init = tuple(args.init) if args.init else MleConfig().init
    cfg = MleConfig(init=init, warm_start=args.warm_start, compute_std_errors=not args.no_std_errors)
    report.inputs = {'data': args.data, 'n': data.n, 'config': cfg.as_dict()}
    say(f"🔧 Fitting 5 parameters to {data.n} observations")
    try:
        result = fit_mle(data, cfg)
    except BPGCError as e:
        partial = getattr(e, 'result', None)
        if partial is not None:
            report.results['fit'] = partial.as_dict()
        raise
    report.results['fit'] = result.as_dict()
    say(f"✅ Estimates {result.estimates}, loglik {result.loglik:.10g}")
    if result.std_error_note:
        say(f"   ⚠️ {result.std_error_note}")
    return False


def cmd_gof(args, report: RunReport) -> bool:
    data = _load(args.data, report)
    cfg = GofConfig(n_sim=args.n_sim, n_perm=args.nperm, seed=args.seed, sampler=args.method)
    report.seed = args.seed
    report.inputs = {'data': args.data, 'n': data.n, 'config': cfg.as_dict(), 'self_compare': args.self_compare}
    if args.self_compare:
        result = ff_test(data, data, cfg)
    else:
        say(f"🔧 Fitting, then testing against {cfg.n_sim or data.n} simulated draws ({cfg.n_perm} permutations)")
        mle, result = fitted_gof(data, cfg, MleConfig(compute_std_errors=False))
        report.results['fit'] = mle.as_dict()
    report.results['gof'] = result.as_dict()
    say(f"📊 d = {result.d_stat:.6g} (raw {result.raw_stat}), p = {result.p_value:.4g}")
    return False


def _simstudy_replicate(job: Tuple[Tuple[float, ...], int, int, int, int, int, str, bool]) -> dict:
    """One simulate -> fit (-> test) replicate; failures are returned, not raised."""
    raw, size, replicate, seed, gof_n, n_perm, method, with_gof = job
    truth = validate_params(raw)
    row = {'size': size, 'replicate': replicate, 'seed': seed, 'status': 'ok', 'error': None}
    try:
        batch = draw(truth, size, derive_seed(seed, 0), method)
        result = fit_mle(batch.to_dataset(), MleConfig(compute_std_errors=False))
        row.update(result.estimates.as_dict())
        row['loglik'] = result.loglik
        if with_gof:
            gof = compare_fitted_to_truth(truth, result.estimates, gof_n,
                                          GofConfig(n_perm=n_perm, seed=derive_seed(seed, 1), sampler=method))
            row['gof'] = gof.as_dict()
    except BPGCError as e:
        row['status'] = e.error_code
        row['error'] = str(e)
    return row


def _run_jobs(jobs: Sequence[tuple], threads: int) -> List[dict]:
    if threads <= 1:
        return [_simstudy_replicate(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_simstudy_replicate, jobs))


def cmd_simstudy(args, report: RunReport) -> bool:
    raw = tuple(args.params) if args.params else SIMSTUDY_CASES[args.case]
    truth = validate_params(raw)
    sizes = list(args.sizes)
    report.seed = args.seed
    report.inputs = {
        'truth': truth.as_dict(), 'case': None if args.params else args.case, 'sizes': sizes,
        'replicates': args.replicates, 'gof_replicates': args.gof_replicates, 'gof_n': args.gof_n,
        'nperm': args.nperm, 'method': args.method, 'threads': args.threads,
    }

    jobs = []
    for i, size in enumerate(sizes):
        size_seed = derive_seed(args.seed, i)
        for r in range(args.replicates):
            jobs.append((raw, size, r, derive_seed(size_seed, r), args.gof_n, args.nperm,
                         args.method, r < args.gof_replicates))
    say(f"🧪 Simulation study for {truth}: {len(jobs)} replicates on {args.threads} worker(s)")
    rows = _run_jobs(jobs, args.threads)

    table1 = pd.DataFrame([{k: v for k, v in row.items() if k != 'gof'} for row in rows])
    for name in Params.NAMES:
        if name not in table1:
            table1[name] = np.nan
    table2 = pd.DataFrame([
        {'size': row['size'], 'replicate': row['replicate'], **row['gof']}
        for row in rows if 'gof' in row
    ])

    ok = table1[table1['status'] == 'ok']
    summary = []
    for size in sizes:
        block = ok[ok['size'] == size]
        entry = {'size': size, 'succeeded': int(len(block))}
        for name in Params.NAMES:
            entry[f'mean_{name}'] = float(block[name].mean()) if len(block) else math.nan
            entry[f'mae_{name}'] = float((block[name] - getattr(truth, name)).abs().mean()) if len(block) else math.nan
        summary.append(entry)
    summary_frame = pd.DataFrame(summary)

    trend = None
    if len(sizes) > 1:
        order = np.argsort(sizes)
        trend = {
            name: bool(np.all(np.diff(summary_frame[f'mae_{name}'].to_numpy()[order]) < 0))
            for name in Params.NAMES
        }

    if args.out:
        out = Path(args.out)
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise DatasetIOError(f"cannot create {out}: {e}")
        write_frame(table1, str(out / 'table1.csv'))
        write_frame(summary_frame, str(out / 'table1_summary.csv'))
        write_frame(table2, str(out / 'table2.csv'))

    share = len(ok) / len(rows)
    report.results = {
        'summary': summary_frame.to_dict(orient='records'),
        'mae_decreasing': trend,
        'gof': table2.to_dict(orient='records'),
        'failures': table1[table1['status'] != 'ok'][['size', 'replicate', 'status', 'error']].to_dict(orient='records'),
        'success_share': share,
        'out': args.out,
    }
    if share < SUCCESS_SHARE:
        report.status = 'partial'
        report.exit_code = 4
        say(f"❌ Only {share:.0%} of replicates succeeded")
    else:
        say(f"✅ {len(ok)}/{len(rows)} replicates succeeded")
    for entry in summary:
        say(f"   n={entry['size']}: " + ', '.join(f"{n}={entry[f'mean_{n}']:.4f}" for n in Params.NAMES))
    return False


def cmd_make_dataset(args, report: RunReport) -> bool:
    template = TEMPLATES[args.template]
    params = validate_params(template['params'])
    report.seed = args.seed
    report.inputs = {'template': args.template, 'params': params.as_dict(), 'n': args.n, 'method': args.method}
    batch = draw(params, args.n, args.seed, args.method)
    write_dataset(batch.x, batch.y, args.out, sys.stdout)
    stats = describe(batch.to_dataset())
    report.results = {'summary': stats, 'reference': template['reference'], 'out': args.out}
    say(f"🏥 {args.template}: mean x {stats['x']['mean']:.3f} (ref {template['reference']['x']['mean']}), "
        f"mean y {stats['y']['mean']:.3f} (ref {template['reference']['y']['mean']})")
    return args.out is None


def histogram_table(params: Params, data, y_bins: int = 30, x_max: Optional[int] = None) -> pd.DataFrame:
    """Empirical and model probabilities on unit x bins and equal-width y bins."""
    x_max = int(data.x.max()) if x_max is None else int(x_max)
    edges = np.linspace(float(data.y.min()), float(data.y.max()), y_bins + 1)
    norm = log_normalizer(params)
    pmf = np.exp(np.atleast_1d(log_pmf_x(params, np.arange(x_max + 1), norm)))

    counts = np.zeros((x_max + 1, y_bins), dtype=np.int64)
    keep = data.x <= x_max
    cols = np.clip(np.searchsorted(edges, data.y[keep], side='right') - 1, 0, y_bins - 1)
    np.add.at(counts, (data.x[keep], cols), 1)

    rows = []
    for x in range(x_max + 1):
        gamma = GammaConditional(params.m02 + params.m12 * x, params.m01 + params.m11 * x)
        probs = pmf[x] * np.diff(gamma.cdf(edges))
        for j in range(y_bins):
            rows.append({
                'x': x, 'y_low': edges[j], 'y_high': edges[j + 1], 'count': int(counts[x, j]),
                'empirical': counts[x, j] / data.n, 'model': float(probs[j]),
            })
    return pd.DataFrame(rows)


def cmd_histogram(args, report: RunReport) -> bool:
    data = _load(args.data, report)
    if args.params:
        params = validate_params(args.params)
    else:
        say("🔧 No --params given, fitting the data first")
        params = fit_mle(data, MleConfig(compute_std_errors=False)).estimates
    report.inputs = {'data': args.data, 'params': params.as_dict(), 'y_bins': args.y_bins, 'x_max': args.x_max}
    table = histogram_table(params, data, args.y_bins, args.x_max)
    write_frame(table, args.out, sys.stdout)
    report.results = {
        'cells': len(table),
        'model_mass': float(table['model'].sum()),
        'empirical_mass': float(table['empirical'].sum()),
        'out': args.out,
    }
    say(f"📊 {len(table)} histogram cells written to {args.out or 'standard output'}")
    return args.out is None
