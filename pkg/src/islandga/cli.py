"""Command-line client for the experiment service.

All experiment work flows through the service API; by default the service is
mounted in-process, while ``--server URL`` targets a running instance. CSV
artifacts returned by the service are written verbatim into ``--out-dir``.

Exit codes: 0 success, 1 I/O or unexpected failure, 2 missing file,
3 config parse error, 4 config/validation error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import asdict

from .config import ConfigParseError, ConfigValidationError, apply_overrides, load_config
from .service.client import ServiceClient, ServiceError

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_NOT_FOUND = 2
EXIT_PARSE = 3
EXIT_INVALID = 4


def _add_experiment_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--preset", help="name of a built-in experiment preset")
    parser.add_argument("--config", help="path of a key = value config file")
    parser.add_argument("--policy", help="migrant-selection policy override")
    parser.add_argument("--seed", type=int, help="master seed override")
    parser.add_argument("--replicates", type=int, help="replicate count override")
    parser.add_argument(
        "--no-stop-on-optimum",
        action="store_true",
        help="run every replicate to the evaluation cap (entropy studies)",
    )
    parser.add_argument("--workers", type=int, default=1, help="replicate worker processes")
    parser.add_argument("--out-dir", default="out", help="directory for CSV outputs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="islandga",
        description="Island-model GA experiment harness (client for the islandga service).",
    )
    parser.add_argument("--server", help="service base URL; default runs the service in process")
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="run one replicated experiment batch")
    _add_experiment_args(run_parser)

    sweep_parser = sub.add_parser("sweep", help="run one batch per policy and compare them")
    _add_experiment_args(sweep_parser)
    sweep_parser.add_argument(
        "--policies",
        required=True,
        help="comma-separated policy names, e.g. best,random,mk",
    )

    compare_parser = sub.add_parser("compare", help="compare previously written summary CSVs")
    compare_parser.add_argument("summaries", nargs="+", help="summary.csv paths (>= 2)")
    compare_parser.add_argument("--out-dir", default=".", help="directory for comparison.csv")

    sub.add_parser("presets", help="list built-in experiment presets")

    serve_parser = sub.add_parser("serve", help="start the HTTP service")
    serve_parser.add_argument("--host", default="127.0.0.1")
    serve_parser.add_argument("--port", type=int, default=8000)

    return parser


def _experiment_payload(args: argparse.Namespace) -> dict:
    overrides = {
        "policy": args.policy,
        "master_seed": args.seed,
        "replicates": args.replicates,
        "stop_on_optimum": False if args.no_stop_on_optimum else None,
    }
    if args.config and args.preset:
        raise ConfigValidationError("preset", "use either --preset or --config, not both")
    if args.config:
        config = apply_overrides(load_config(args.config), **overrides)
        payload = {k: v for k, v in asdict(config).items() if v is not None}
    elif args.preset:
        payload = {"preset": args.preset}
        payload.update({k: v for k, v in overrides.items() if v is not None})
    else:
        raise ConfigValidationError("preset", "one of --preset or --config is required")
    payload["workers"] = args.workers
    return payload


def _write_artifacts(out_dir: str, artifacts: dict[str, str]) -> None:
    os.makedirs(out_dir, exist_ok=True)
    for name, text in artifacts.items():
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        print(f"wrote {path}")


def _print_summaries(summaries: list[dict]) -> None:
    for s in summaries:
        median = s["median"] if s["median"] is not None else "n/a"
        mean = s["mean"] if s["mean"] is not None else "n/a"
        print(
            f"policy={s['policy']} solved={s['successes']}/{s['runs']} "
            f"median_evals={median} mean_evals={mean}"
        )


def _cmd_run(client: ServiceClient, args: argparse.Namespace) -> int:
    payload = _experiment_payload(args)
    response = client.post("/experiments/run", payload)
    _write_artifacts(
        args.out_dir,
        {
            "results.csv": response["results_csv"],
            "entropy.csv": response["entropy_csv"],
            "summary.csv": response["summary_csv"],
        },
    )
    _print_summaries([response["summary"]])
    return EXIT_OK


def _cmd_sweep(client: ServiceClient, args: argparse.Namespace) -> int:
    payload = _experiment_payload(args)
    payload["policies"] = [p.strip() for p in args.policies.split(",") if p.strip()]
    response = client.post("/experiments/sweep", payload)
    _write_artifacts(
        args.out_dir,
        {
            "results.csv": response["results_csv"],
            "entropy.csv": response["entropy_csv"],
            "summary.csv": response["summary_csv"],
            "comparison.csv": response["comparison_csv"],
        },
    )
    _print_summaries(response["summaries"])
    return EXIT_OK


def _cmd_compare(client: ServiceClient, args: argparse.Namespace) -> int:
    texts = []
    for path in args.summaries:
        with open(path, "r", encoding="utf-8") as fh:
            texts.append(fh.read())
    response = client.post("/compare", {"summaries": texts})
    _write_artifacts(args.out_dir, {"comparison.csv": response["comparison_csv"]})
    for row in response["comparison"]:
        median = row["median"] if row["median"] is not None else "n/a"
        print(
            f"#{row['rank_by_median']} {row['policy']}: median_evals={median} "
            f"solved={row['successes']}/{row['runs']}"
        )
    return EXIT_OK


def _cmd_presets(client: ServiceClient) -> int:
    for item in client.get("/presets"):
        cfg = item["config"]
        if cfg["problem"] == "mmdp":
            problem = f"mmdp(k={cfg['mmdp_k']})"
        else:
            problem = f"ppeaks(P={cfg['ppeaks_peaks']}, N={cfg['ppeaks_length']})"
        print(
            f"{item['name']}: {problem}, islands={cfg['islands']}, "
            f"population={cfg['population_size']}, rate={cfg['selection_rate']}, "
            f"migration_every={cfg['generations_to_migration']} gens, "
            f"cap={cfg['max_evaluations']}"
        )
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("islandga.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return _cmd_serve(args)
    client = ServiceClient(server=args.server)
    try:
        if args.command == "run":
            return _cmd_run(client, args)
        if args.command == "sweep":
            return _cmd_sweep(client, args)
        if args.command == "compare":
            return _cmd_compare(client, args)
        if args.command == "presets":
            return _cmd_presets(client)
        raise AssertionError(f"unhandled command {args.command}")
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename or exc}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except ConfigParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConfigValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ServiceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID if exc.status_code in (404, 422) else EXIT_FAILURE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
