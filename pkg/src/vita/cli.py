"""Command-line entry points.

``vita repl <csv>`` runs an interactive command loop against a local session;
``vita run <workflow> <csv>`` executes a workflow file headless; ``vita
serve`` starts the HTTP/WS service; ``vita stopwords`` prints the embedded
stopword list.
"""

from __future__ import annotations

import argparse
import json
import sys
import tempfile
from pathlib import Path

from .errors import OperatorSyntaxError, VitaError
from .session import Session
from .stopwords import STOPWORDS
from .viz import to_vegalite


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="vita", description="In-situ visual text analysis")
    sub = parser.add_subparsers(dest="cmd", required=True)

    repl = sub.add_parser("repl", help="interactive command loop over a CSV")
    _add_session_args(repl)

    run = sub.add_parser("run", help="execute a workflow file headless")
    run.add_argument("workflow", help="file of commands, one per line")
    _add_session_args(run)

    serve = sub.add_parser("serve", help="start the HTTP/WebSocket service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8878)
    serve.add_argument("--session-dir", default=".vita-sessions")

    sub.add_parser("stopwords", help="print the embedded stopword list")

    args = parser.parse_args(argv)
    if args.cmd == "stopwords":
        print("\n".join(sorted(STOPWORDS)))
        return 0
    if args.cmd == "serve":
        import uvicorn

        from .server import create_app

        uvicorn.run(create_app(args.session_dir), host=args.host, port=args.port)
        return 0

    session_dir = args.session_dir or tempfile.mkdtemp(prefix="vita-")
    session = Session.create(
        session_dir,
        csv_path=args.csv,
        text_columns=tuple(args.text_columns or ()),
        delimiter=args.delimiter,
    )
    print(f"loaded {session.state.frame.num_rows} rows from {args.csv} (version {session.head})")

    if args.cmd == "repl":
        return _loop(session, sys.stdin, args, echo=sys.stdin.isatty(), stop_on_error=False)
    with open(args.workflow, encoding="utf-8") as f:
        return _loop(session, f, args, echo=False, stop_on_error=True)


def _add_session_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("csv", help="corpus CSV, first row is the header")
    p.add_argument("--text-columns", nargs="*", default=["Review"], help="columns to treat as Text")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--emit-charts", metavar="DIR", help="write Vega-Lite documents for new charts")
    p.add_argument("--session-dir", help="where snapshots live (default: a temp dir)")


def _loop(session: Session, lines, args, echo: bool, stop_on_error: bool) -> int:
    if echo:
        print("vita> ", end="", flush=True)
    for raw in lines:
        line = raw.strip()
        if line and not line.startswith("#"):
            code = _run_line(session, line, args)
            if code != 0 and stop_on_error:
                return code
        if echo:
            print("vita> ", end="", flush=True)
    if echo:
        print()
    return 0


def _run_line(session: Session, line: str, args) -> int:
    try:
        result = session.apply("command", line)
    except OperatorSyntaxError as e:
        print(f"error: {e}", file=sys.stderr)
        print(f"  {line}", file=sys.stderr)
        print(f"  {' ' * e.position}^", file=sys.stderr)
        return 1
    except VitaError as e:
        print(f"error: {type(e).__name__.removesuffix('Error')}: {e}", file=sys.stderr)
        return 1

    parts = [f"v{result.version_id}"]
    if result.new_viz:
        parts.append("viz: " + ", ".join(v["view_id"] for v in result.new_viz))
    if result.effects:
        parts.append(
            "effects: "
            + "; ".join(
                f"{e['view']} {e['effect']}"
                + (f" ({len(e['row_ids'])} rows)" if e["row_ids"] else "")
                for e in result.effects
            )
        )
    parts.append(f"{result.table['total']} rows visible")
    print(" | ".join(parts))

    if args.emit_charts and result.new_viz:
        out_dir = Path(args.emit_charts)
        out_dir.mkdir(parents=True, exist_ok=True)
        for entry in result.new_viz:
            doc = json.dumps(entry["vegalite"], sort_keys=True, separators=(",", ":"))
            path = out_dir / f"{entry['view_id']}.vl.json"
            path.write_text(doc, encoding="utf-8")
            print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
