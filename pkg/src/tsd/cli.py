"""Command line client for the toolkit service.

Every subcommand builds exactly one HTTP request. By default the request
is answered in process (an ASGI transport mounted straight on the app, no
socket involved); pass --server to talk to a running `tsd serve` instead.
Either way the CLI stays a thin shell: all real work, and all input
checking beyond JSON decoding, happens behind the service endpoints.

Exit codes: 0 success, 1 internal error or unreachable server,
2 invalid input (document, parameters, or a failed validate), 3 time
limit hit.
"""

import argparse
import asyncio
import json
import sys

import httpx

from .bench import bench_csv
from .errors import TsdError
from .locgraph import LocationOrder
from .model import event_graph_to_obj
from .solvers import SolveResult


class ServiceError(TsdError):
    """A non-2xx answer from the service, carrying its status and detail."""

    def __init__(self, status, detail):
        if isinstance(detail, dict) and "error" in detail:
            message = detail["error"]
        else:
            message = json.dumps(detail)
        super().__init__(message)
        self.status = status
        self.detail = detail

    @property
    def exit_code(self) -> int:
        if self.status == 408:
            return 3
        if self.status in (400, 422):
            return 2
        return 1


class _Failure(Exception):
    """A client-side failure with a definite exit code."""

    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class Client:
    """Small wrapper around httpx: in-process by default, remote on demand.

    httpx's ASGI transport is async only, so in-process requests run one
    short-lived AsyncClient per call under asyncio.run; without sockets
    that setup costs nothing measurable.
    """

    def __init__(self, server=None):
        self._client = None
        self._app = None
        if server:
            self._client = httpx.Client(base_url=server, timeout=None)
        else:
            from .service import app
            self._app = app

    def close(self):
        if self._client is not None:
            self._client.close()

    def get(self, path):
        return self._request("GET", path, None)

    def post(self, path, payload):
        return self._request("POST", path, payload)

    def _request(self, method, path, payload):
        if self._client is not None:
            response = self._client.request(method, path, json=payload)
        else:
            response = asyncio.run(self._asgi(method, path, payload))
        return self._answer(response)

    async def _asgi(self, method, path, payload):
        transport = httpx.ASGITransport(app=self._app)
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://tsd",
                                     timeout=None) as client:
            return await client.request(method, path, json=payload)

    @staticmethod
    def _answer(response):
        if response.status_code >= 300:
            try:
                detail = response.json().get("detail", response.text)
            except ValueError:
                detail = response.text
            raise ServiceError(response.status_code, detail)
        return response.json()


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise _Failure(1, "cannot read %s: %s" % (path, exc))
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _Failure(2, "%s is not valid JSON: %s" % (path, exc))


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, out):
    _emit(json.dumps(obj, indent=2) + "\n", out)


def cmd_validate(args, client) -> int:
    report = client.post("/validate", {"graph": _load_json(args.file)})
    _emit_json(report, None)
    return 0 if report["valid"] else 2


def cmd_stats(args, client) -> int:
    _emit_json(client.post("/stats", {"graph": _load_json(args.file)}), None)
    return 0


def cmd_reduce(args, client) -> int:
    answer = client.post("/reduce", {"graph": _load_json(args.file),
                                     "mode": args.mode})
    _emit_json(answer["graph"], args.output)
    if args.report:
        _emit_json(answer["report"], args.report)
    return 0


def cmd_treedecomp(args, client) -> int:
    answer = client.post("/treedecomp", {"graph": _load_json(args.file),
                                         "nice": args.nice})
    _emit_json(answer, args.output)
    return 0


def cmd_solve(args, client) -> int:
    payload = {
        "graph": _load_json(args.file),
        "method": args.method,
        "reduce": not args.no_reduce,
        "reduce_mode": args.reduce_mode,
        "time_limit": args.time_limit,
    }
    _emit_json(client.post("/solve", payload), args.output)
    return 0


def cmd_export_lp(args, client) -> int:
    answer = client.post("/export-lp", {"graph": _load_json(args.file),
                                        "formulation": args.formulation})
    _emit(answer["lp"], args.output)
    return 0


def cmd_gen(args, client) -> int:
    params = {}
    for item in args.param or []:
        name, _, value = item.partition("=")
        if not _ or not name:
            raise _Failure(2, "family parameters look like name=value, got %r"
                           % item)
        try:
            params[name] = json.loads(value)
        except json.JSONDecodeError:
            raise _Failure(2, "parameter %s needs a numeric value, got %r"
                           % (name, value))
    answer = client.post("/generate", {"family": args.family,
                                       "seed": args.seed, "params": params})
    _emit_json(answer["graph"], args.output)
    sidecar = args.output[:-len(".json")] if args.output.endswith(".json") \
        else args.output
    _emit_json(answer["meta"], sidecar + ".meta.json")
    return 0


def cmd_render(args, client) -> int:
    order_obj = _load_json(args.order)
    order = order_obj["order"] if isinstance(order_obj, dict) else order_obj
    payload = {"graph": _load_json(args.file), "order": order}
    if args.style:
        payload["style"] = _load_json(args.style)
    answer = client.post("/render", payload)
    _emit(answer["svg"], args.output)
    return 0


def cmd_bench(args, client) -> int:
    def through_service(g, method):
        answer = client.post("/solve", {"graph": event_graph_to_obj(g),
                                        "method": method})
        return SolveResult(LocationOrder.from_sequence(answer["order"]),
                           answer["turns"], answer["method"],
                           answer["stats"])

    methods = [m for m in args.methods.split(",") if m]
    try:
        document = bench_csv(args.directory, methods, reps=args.reps,
                             solve_fn=through_service)
    except ValueError as exc:
        raise _Failure(2, str(exc))
    _emit(document, args.output)
    return 0


def cmd_serve(args, client) -> int:
    import uvicorn

    from .service import app
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsd",
        description="turn-minimal time-space diagrams for train event graphs")
    parser.add_argument("--server", metavar="URL", default=None,
                        help="send requests to a running tsd serve instead "
                             "of answering them in process")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an event graph document")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", help="print instance summary counters")
    p.add_argument("file")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("reduce", help="contract turn-preserving structure")
    p.add_argument("file")
    p.add_argument("--mode", choices=("chain", "full"), default="chain")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--report", default=None,
                   help="also write the contraction report here")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("treedecomp",
                       help="tree decomposition of the augmented location "
                            "graph")
    p.add_argument("file")
    p.add_argument("--nice", action="store_true",
                   help="refine into a nice decomposition")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_treedecomp)

    p = sub.add_parser("solve", help="compute a turn-minimal order")
    p.add_argument("file")
    p.add_argument("--method", default="dp",
                   choices=("brute", "dp", "ilp", "ilp-tw", "cutplane"))
    p.add_argument("--no-reduce", action="store_true",
                   help="solve the instance as given, skip contraction")
    p.add_argument("--reduce-mode", choices=("chain", "full"),
                   default="chain")
    p.add_argument("--time-limit", type=float, default=None, metavar="SECS")
    p.add_argument("--seed", type=int, default=0,
                   help="accepted for interface stability; every method "
                        "here is deterministic")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("export-lp", help="write the 0/1 program in LP format")
    p.add_argument("file")
    p.add_argument("--formulation", choices=("naive", "tw"), default="naive")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_export_lp)

    p = sub.add_parser("gen", help="generate a benchmark instance")
    p.add_argument("--family", required=True,
                   choices=("betweenness", "maxcut", "corridor", "random"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param", action="append", metavar="NAME=VALUE",
                   help="family parameter, repeatable (for example "
                        "--param n_loc=8)")
    p.add_argument("-o", "--output", required=True,
                   help="instance file; metadata goes to the .meta.json "
                        "sidecar next to it")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("render", help="draw the time-space diagram as SVG")
    p.add_argument("file")
    p.add_argument("--order", required=True,
                   help="a solve result file, or a bare JSON list of "
                        "locations top to bottom")
    p.add_argument("--style", default=None,
                   help="JSON file with canvas style overrides")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("bench", help="benchmark a directory of instances")
    p.add_argument("directory")
    p.add_argument("--methods", required=True,
                   help="comma-separated list, for example dp,ilp-tw")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    client = None if args.command == "serve" else Client(args.server)
    try:
        return args.func(args, client)
    except ServiceError as exc:
        json.dump(exc.detail, sys.stderr, indent=2)
        sys.stderr.write("\n")
        return exc.exit_code
    except _Failure as exc:
        print("tsd: %s" % exc, file=sys.stderr)
        return exc.code
    except TsdError as exc:
        # client-side library failure, e.g. the bench cross-check
        print("tsd: %s" % exc, file=sys.stderr)
        return 1
    except httpx.HTTPError as exc:
        print("tsd: cannot reach the service: %s" % exc, file=sys.stderr)
        return 1
    finally:
        if client is not None:
            client.close()


if __name__ == "__main__":
    sys.exit(main())
