"""Command-line entry point.

    entrolp <pdfile> [regular|hull|random|prove|sensitivity] [modifier ...]

Modifiers are JSON objects given as extra arguments and applied left to
right.  With ENTROLP_SERVER set to a base URL, the CLI becomes a thin client
of a running entrolp HTTP service and sends the work there instead of
computing in-process.
"""

from __future__ import annotations

import os
import sys

from .pipeline import EXIT_SOLVER, EXIT_USAGE, MODES, USAGE, run_pipeline

ENV_SERVER = "ENTROLP_SERVER"


def _parse_argv(argv):
    """Split argv into (pd_path, mode, modifiers, seed, fraction) or raise
    ValueError with a usage-worthy message."""
    args = list(argv)
    seed, fraction = 0, 0.5
    plain = []
    k = 0
    while k < len(args):
        a = args[k]
        if a == "--seed":
            if k + 1 >= len(args):
                raise ValueError("--seed needs a value")
            seed = int(args[k + 1])
            k += 2
        elif a == "--fraction":
            if k + 1 >= len(args):
                raise ValueError("--fraction needs a value")
            fraction = float(args[k + 1])
            k += 2
        else:
            plain.append(a)
            k += 1
    if not plain:
        raise ValueError("missing problem-description file")
    pd_path = plain[0]
    mode = "regular"
    rest = plain[1:]
    if rest and not rest[0].lstrip().startswith("{"):
        if rest[0] not in MODES:
            raise ValueError(f"unknown computation mode {rest[0]!r}")
        mode = rest[0]
        rest = rest[1:]
    for m in rest:
        if not m.lstrip().startswith("{"):
            raise ValueError(f"unexpected argument {m!r} (modifiers are JSON objects)")
    return pd_path, mode, rest, seed, fraction


def _run_remote(server, text, mode, modifiers, seed, fraction):
    import httpx

    resp = httpx.post(
        server.rstrip("/") + "/run",
        json={
            "pd_text": text,
            "mode": mode,
            "modifiers": list(modifiers),
            "seed": seed,
            "fraction": fraction,
        },
        timeout=600.0,
    )
    if resp.status_code != 200:
        print(f"server error ({resp.status_code}): {resp.text}", file=sys.stderr)
        return EXIT_SOLVER
    body = resp.json()
    if body.get("output"):
        sys.stdout.write(body["output"])
    if body.get("error"):
        print(body["error"], file=sys.stderr)
    return int(body.get("exit_code", 0))


def main(argv):
    try:
        pd_path, mode, modifiers, seed, fraction = _parse_argv(argv)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(USAGE, file=sys.stderr)
        return EXIT_USAGE
    try:
        with open(pd_path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {pd_path}: {exc}", file=sys.stderr)
        print(USAGE, file=sys.stderr)
        return EXIT_USAGE

    server = os.environ.get(ENV_SERVER)
    if server:
        return _run_remote(server, text, mode, modifiers, seed, fraction)

    result = run_pipeline(text, mode=mode, modifiers=modifiers, seed=seed,
                          fraction=fraction)
    if result.output:
        sys.stdout.write(result.output)
    if result.error:
        print(result.error, file=sys.stderr)
    return result.exit_code


def console_main():
    raise SystemExit(main(sys.argv[1:]))


if __name__ == "__main__":
    console_main()
