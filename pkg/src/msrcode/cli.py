"""Command-line tool: encode files into per-node shares, reconstruct them
under injected corruption, repair a lost share, patch single symbols, run
failure-rate simulations, and inspect parameter tuples.

Node labels are 1-based on the command line and in printed output; share
file headers carry the 0-based index.  Exit codes: 0 success, 1 usage or
parameter error, 2 reconstruction failure.
"""

from __future__ import annotations

import argparse
import math
import random
import sys
from pathlib import Path

from .bits import bytes_to_symbols, symbols_to_bytes
from .field import Field
from .msr import (
    InvalidParams,
    NodeShare,
    WrongLength,
    encode_all,
    generator_set,
    helper_symbol,
    make_params,
    pack_message,
    regenerate,
    update_complexity,
    update_patch,
)
from .reconstruct import (
    attach_crc,
    crc_payload_length,
    crc_trailer_length,
    make_integrity_checker,
    reconstruct_progressive,
)
from .shares import (
    CRC_SCHEME,
    HEADER_SIZE,
    Manifest,
    ShareFile,
    ShareFormatError,
    read_share,
    share_filename,
    symbol_width,
    write_share,
)
from .sim import SimConfig, corrupt_symbols, run_sweep, write_csv, write_gnuplot_script

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DECODE_FAIL = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; remap to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _fail(message: str, code: int = EXIT_USAGE) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _build_context(manifest: Manifest):
    params = manifest.params()
    field = Field(params.m, manifest.primitive_poly)
    gen = generator_set(params, manifest.flavor, field)
    return params, gen


def _load_manifest(share_dir: str, manifest_arg: str | None) -> Manifest:
    path = Path(manifest_arg) if manifest_arg else Path(share_dir) / "manifest.json"
    return Manifest.load(path)


def _available_shares(share_dir: str, manifest: Manifest) -> dict[int, ShareFile]:
    out = {}
    for node in range(manifest.n):
        path = Path(share_dir) / manifest.file_for_node(node)
        if not path.exists():
            continue
        share = read_share(path)
        if (share.n, share.k, share.m) != (manifest.n, manifest.k, manifest.m):
            raise ShareFormatError(f"{path}: header disagrees with manifest")
        if share.node_index != node or share.stripe_count != manifest.stripe_count:
            raise ShareFormatError(f"{path}: node index or stripe count disagrees with manifest")
        out[node] = share
    return out


def _parse_node_list(raw: str | None, n: int) -> frozenset[int]:
    if not raw:
        return frozenset()
    out = set()
    for piece in raw.split(","):
        label = int(piece)
        if not 1 <= label <= n:
            raise ValueError(f"node label {label} outside 1..{n}")
        out.add(label - 1)
    return frozenset(out)


# ---------------------------------------------------------------------------


def cmd_encode(args) -> int:
    try:
        params = make_params(args.n, args.k, args.m)
    except InvalidParams as exc:
        return _fail(str(exc))
    gen = generator_set(params, args.flavor)
    try:
        payload_len = crc_payload_length(params)
    except WrongLength as exc:
        return _fail(str(exc))

    data = Path(args.input).read_bytes()
    symbols = bytes_to_symbols(data, params.m)
    stripe_count = max(1, -(-len(symbols) // payload_len))
    node_stripes: list[list[tuple[int, ...]]] = [[] for _ in range(params.n)]
    for s in range(stripe_count):
        chunk = symbols[s * payload_len : (s + 1) * payload_len]
        chunk += [0] * (payload_len - len(chunk))
        message = attach_crc(params, chunk)
        shares = encode_all(params, gen, pack_message(params, message))
        for node, share in enumerate(shares):
            node_stripes[node].append(share.symbols)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for node in range(params.n):
        name = share_filename(node)
        write_share(out_dir / name, ShareFile(params.n, params.k, params.m, node, node_stripes[node]))
        entries.append({"node": node + 1, "file": name})
    manifest = Manifest(
        n=params.n,
        k=params.k,
        m=params.m,
        flavor=args.flavor,
        primitive_poly=gen.field.poly,
        file_length=len(data),
        stripe_count=stripe_count,
        payload_symbols_per_stripe=payload_len,
        crc_scheme=CRC_SCHEME,
        shares=entries,
    )
    manifest.save(out_dir / "manifest.json")
    print(
        f"encoded {len(data)} bytes into {params.n} shares: {stripe_count} stripe(s), "
        f"{payload_len} payload symbols ({payload_len * params.m} bits) + "
        f"{crc_trailer_length(params.m)} integrity symbols per stripe"
    )
    print(f"wrote {out_dir / 'manifest.json'}")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    manifest = _load_manifest(args.share_dir, args.manifest)
    params, gen = _build_context(manifest)
    available = _available_shares(args.share_dir, manifest)
    try:
        corrupt = _parse_node_list(args.corrupt_nodes, params.n)
    except ValueError as exc:
        return _fail(str(exc))

    payload_len = manifest.payload_symbols_per_stripe
    integrity = make_integrity_checker(params)
    collected: list[int] = []
    for s in range(manifest.stripe_count):

        def source(node, _stripe=s):
            share = available.get(node)
            if share is None:
                return None
            column = share.stripes[_stripe]
            if node in corrupt:
                hook_rng = random.Random(f"{args.seed}:corrupt:{_stripe}:{node}")
                return corrupt_symbols(hook_rng, gen.field, column)
            return column

        rng = random.Random(f"{args.seed}:stripe:{s}")
        report = reconstruct_progressive(params, gen, source, integrity, rng)
        if not report.success:
            print(f"stripe {s}: FAIL ({report.failure_reason}) after {report.nodes_accessed} nodes")
            return EXIT_DECODE_FAIL
        bad_labels = sorted(node + 1 for node in report.erroneous_nodes)
        print(
            f"stripe {s}: nodes_accessed={report.nodes_accessed} rounds={report.rounds} "
            f"bad_nodes={bad_labels}"
        )
        collected.extend(report.recovered_message[:payload_len])

    Path(args.output).write_bytes(symbols_to_bytes(collected, params.m, manifest.file_length))
    print(f"reconstructed {manifest.file_length} bytes -> {args.output}")
    return EXIT_OK


def cmd_repair(args) -> int:
    manifest = _load_manifest(args.share_dir, args.manifest)
    params, gen = _build_context(manifest)
    if not 1 <= args.failed <= params.n:
        return _fail(f"node label {args.failed} outside 1..{params.n}")
    failed = args.failed - 1
    available = _available_shares(args.share_dir, manifest)
    available.pop(failed, None)
    helper_nodes = sorted(available)[: params.d]
    if len(helper_nodes) < params.d:
        return _fail(
            f"NotEnoughHelpers: need d={params.d} helper shares, found {len(available)}"
        )

    stripes = []
    for s in range(manifest.stripe_count):
        helpers = [
            (h, helper_symbol(gen, NodeShare(h, available[h].stripes[s]), failed))
            for h in helper_nodes
        ]
        stripes.append(regenerate(params, gen, failed, helpers).symbols)
    path = Path(args.share_dir) / manifest.file_for_node(failed)
    write_share(path, ShareFile(params.n, params.k, params.m, failed, stripes))
    total = params.d * manifest.stripe_count
    print(
        f"repaired node {args.failed} from helpers {[h + 1 for h in helper_nodes]} -> {path}"
    )
    print(
        f"repair bandwidth: {params.d} symbols/stripe ({total} total) vs "
        f"k*alpha = {params.B} symbols/stripe for a naive rebuild"
    )
    return EXIT_OK


def cmd_update(args) -> int:
    manifest = _load_manifest(args.share_dir, args.manifest)
    params, gen = _build_context(manifest)
    payload_len = manifest.payload_symbols_per_stripe
    if not 0 <= args.stripe < manifest.stripe_count:
        return _fail(f"stripe {args.stripe} outside 0..{manifest.stripe_count - 1}")
    if not 0 <= args.symbol < payload_len:
        return _fail(f"BadIndex: payload symbol {args.symbol} outside 0..{payload_len - 1}")
    if not 0 <= args.value < gen.field.order:
        return _fail(f"value {args.value} outside GF(2^{params.m})")
    available = _available_shares(args.share_dir, manifest)

    def source(node, _stripe=args.stripe):
        share = available.get(node)
        return share.stripes[_stripe] if share else None

    rng = random.Random(f"update:{args.stripe}")
    report = reconstruct_progressive(params, gen, source, make_integrity_checker(params), rng)
    if not report.success:
        print(f"stripe {args.stripe}: cannot read back current content ({report.failure_reason})")
        return EXIT_DECODE_FAIL
    message = report.recovered_message
    if message[args.symbol] == args.value:
        print("value unchanged; empty patch, nothing rewritten")
        return EXIT_OK

    new_payload = list(message[:payload_len])
    new_payload[args.symbol] = args.value
    new_message = attach_crc(params, new_payload)
    old_packed = pack_message(params, message)
    payload_patch = update_patch(params, gen, old_packed, args.symbol, args.value)
    old_shares = encode_all(params, gen, old_packed)
    new_shares = encode_all(params, gen, pack_message(params, new_message))

    width = symbol_width(params.m)
    changed_nodes = set()
    rewritten = 0
    for node in range(params.n):
        if new_shares[node].symbols == old_shares[node].symbols:
            continue
        share = available.get(node)
        if share is None:
            return _fail(f"share file for affected node {node + 1} is missing")
        if share.stripes[args.stripe] != old_shares[node].symbols:
            print(f"share file for node {node + 1} disagrees with the decoded stripe; aborting")
            return EXIT_DECODE_FAIL
        path = Path(args.share_dir) / manifest.file_for_node(node)
        with open(path, "r+b") as fp:
            for row in range(params.alpha):
                new_sym = new_shares[node].symbols[row]
                if new_sym == old_shares[node].symbols[row]:
                    continue
                fp.seek(HEADER_SIZE + (args.stripe * params.alpha + row) * width)
                fp.write(int(new_sym).to_bytes(width, "little"))
                rewritten += 1
        changed_nodes.add(node)

    payload_nodes = sorted({node + 1 for node, _, _ in payload_patch})
    print(
        f"payload symbol {args.symbol} ({manifest.flavor} flavor): patch touches "
        f"{len(payload_nodes)} node(s) {payload_nodes}, {len(payload_patch)} symbol(s)"
    )
    print(
        f"with integrity trailer refresh: rewrote {rewritten} symbol(s) across "
        f"{len(changed_nodes)} node file(s)"
    )
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        params = make_params(args.n, args.k, args.m)
        config = SimConfig(
            params=params,
            p_grid=[float(x) for x in args.p_grid.split(",")],
            trials=args.trials,
            seed=args.seed,
            corruption=args.corruption,
            flavor=args.flavor,
        )
    except (InvalidParams, ValueError) as exc:
        return _fail(str(exc))

    points = run_sweep(config)
    if args.out:
        with open(args.out, "w") as fp:
            write_csv(points, fp)
        print(f"wrote {args.out}")
    else:
        write_csv(points, sys.stdout)
    if args.gnuplot:
        with open(args.gnuplot, "w") as fp:
            write_gnuplot_script(fp, args.out or "sweep.csv")
        print(f"wrote {args.gnuplot}")

    print(f"\n[{params.n},{params.k},{params.d}] m={params.m} trials={config.trials} seed={config.seed}")
    print(f"{'p':>6}  {'proposed_fail':>13}  {'baseline_fail':>13}  {'mean_nodes':>10}")
    for pt in points:
        print(
            f"{pt.p:>6g}  {pt.proposed_failure_rate:>13.4f}  "
            f"{pt.baseline_failure_rate:>13.4f}  {pt.mean_nodes_accessed:>10.2f}"
        )
    return EXIT_OK


def cmd_params(args) -> int:
    alpha = args.k - 1
    d = 2 * alpha
    checks = [
        ("k >= 2", args.k >= 2, f"k={args.k}"),
        ("d <= n-1", d <= args.n - 1, f"d=2(k-1)={d}, n-1={args.n - 1}"),
        ("n <= 2^m-1", args.n <= (1 << args.m) - 1, f"n={args.n}, 2^{args.m}-1={(1 << args.m) - 1}"),
        (
            "gcd(2^m-1, alpha) = 1",
            math.gcd((1 << args.m) - 1, alpha) == 1,
            f"gcd({(1 << args.m) - 1}, {alpha}) = {math.gcd((1 << args.m) - 1, alpha)}",
        ),
    ]
    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})")
    try:
        params = make_params(args.n, args.k, args.m)
    except InvalidParams as exc:
        print(f"invalid parameters: {exc}")
        return EXIT_USAGE
    sys_w = update_complexity(generator_set(params, "systematic"))
    van_w = update_complexity(generator_set(params, "vandermonde"))
    print(f"alpha={params.alpha} d={params.d} B={params.B} beta={params.beta}")
    print(f"error capability (corrupted nodes tolerated): {params.error_capability}")
    print(f"update complexity: systematic={sys_w}, vandermonde={van_w}")
    print(f"repair bandwidth: d*beta={params.d} symbols/stripe vs B={params.B} naive")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="msrcode", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    enc = sub.add_parser("encode", help="encode a file into n share files plus a manifest")
    enc.add_argument("input")
    enc.add_argument("out_dir")
    enc.add_argument("--n", type=int, required=True)
    enc.add_argument("--k", type=int, required=True)
    enc.add_argument("--m", type=int, required=True)
    enc.add_argument("--flavor", choices=["systematic", "vandermonde"], default="systematic")
    enc.add_argument("--seed", type=int, default=0, help="accepted for symmetry; encoding is deterministic")
    enc.set_defaults(func=cmd_encode)

    rec = sub.add_parser("reconstruct", help="rebuild the original file from shares")
    rec.add_argument("share_dir")
    rec.add_argument("output")
    rec.add_argument("--manifest", default=None, help="default: <share_dir>/manifest.json")
    rec.add_argument("--corrupt-nodes", default=None, help="test hook: 1-based labels, comma separated")
    rec.add_argument("--seed", type=int, default=0)
    rec.set_defaults(func=cmd_reconstruct)

    rep = sub.add_parser("repair", help="regenerate one node's share file from d helpers")
    rep.add_argument("share_dir")
    rep.add_argument("--failed", type=int, required=True, help="1-based node label")
    rep.add_argument("--manifest", default=None)
    rep.set_defaults(func=cmd_repair)

    upd = sub.add_parser("update", help="change one payload symbol, rewriting only affected bytes")
    upd.add_argument("share_dir")
    upd.add_argument("--stripe", type=int, required=True)
    upd.add_argument("--symbol", type=int, required=True, help="payload symbol index within the stripe")
    upd.add_argument("--value", type=int, required=True)
    upd.add_argument("--manifest", default=None)
    upd.set_defaults(func=cmd_update)

    simp = sub.add_parser("simulate", help="Monte Carlo failure-rate sweep")
    simp.add_argument("--n", type=int, default=20)
    simp.add_argument("--k", type=int, default=10)
    simp.add_argument("--m", type=int, default=5)
    simp.add_argument("--p-grid", default="0,0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5")
    simp.add_argument("--trials", type=int, default=1000)
    simp.add_argument("--seed", type=int, default=0)
    simp.add_argument("--corruption", choices=["column", "symbol"], default="column")
    simp.add_argument("--flavor", choices=["systematic", "vandermonde"], default="systematic")
    simp.add_argument("--out", default=None, help="CSV output path (default: stdout)")
    simp.add_argument("--gnuplot", default=None, help="also emit a gnuplot script")
    simp.set_defaults(func=cmd_simulate)

    par = sub.add_parser("params", help="derive and validate a parameter tuple")
    par.add_argument("--n", type=int, required=True)
    par.add_argument("--k", type=int, required=True)
    par.add_argument("--m", type=int, required=True)
    par.set_defaults(func=cmd_params)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InvalidParams, ShareFormatError, WrongLength) as exc:
        return _fail(str(exc))
    except FileNotFoundError as exc:
        return _fail(f"{exc.filename}: not found")


if __name__ == "__main__":
    sys.exit(main())
