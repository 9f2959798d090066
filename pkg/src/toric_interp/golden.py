"""Regeneration of the golden certificate set."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .classify import Catalog, default_catalog
from .degeneration import (
    BASE_BLOCKS,
    PLANE_BASE_CASES,
    BlockLibrary,
    DegenCertificate,
    artifact_filename,
    build_p1xp1,
    build_p2,
    compose_stack,
    search_base,
    verify_certificate,
)
from .errors import ToricError


class GoldenError(ToricError):
    """A regenerated artifact failed verification; nothing further is written."""


BASE_NAMES = tuple(BASE_BLOCKS) + tuple(f"V_{d}" for d in PLANE_BASE_CASES)

# Composed examples: name -> builder taking a warmed library.
COMPOSED = {
    "C_5^7": lambda lib: build_p1xp1(5, 7, library=lib),
    "C_11^5": lambda lib: compose_stack([lib.block("C_11^2"), lib.block("C_11^2")], "vertical", lib.catalog, "C_11^5"),
    "C_8^9": lambda lib: compose_stack([lib.block("C_8^3"), lib.block("C_8^5")], "vertical", lib.catalog, "C_8^9"),
    "C_11^7": lambda lib: build_p1xp1(11, 7, library=lib),
    "V_14": lambda lib: build_p2(14, library=lib),
    "V_16": lambda lib: build_p2(16, library=lib),
}


def thread_count() -> int:
    """Worker cap from TORIC_INTERP_THREADS (default 1)."""
    raw = os.environ.get("TORIC_INTERP_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    return max(1, min(n, os.cpu_count() or 1))


def search_all_bases(catalog: Catalog, budget: int, threads: int | None = None) -> dict[str, DegenCertificate]:
    """Every base block and plane base case, in canonical name order."""
    threads = threads or thread_count()
    if threads == 1:
        return {name: search_base(name, catalog, budget) for name in BASE_NAMES}
    with ProcessPoolExecutor(max_workers=threads) as pool:
        certs = list(pool.map(search_base, BASE_NAMES, [catalog] * len(BASE_NAMES), [budget] * len(BASE_NAMES)))
    return dict(zip(BASE_NAMES, certs))


def regen_golden(outdir, catalog: Catalog | None = None, budget: int = 10_000_000, threads: int | None = None, log=None) -> list[Path]:
    """Search, assemble, re-verify and write every golden certificate."""
    catalog = catalog or default_catalog()
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    lib = BlockLibrary(catalog, budget)
    certs: dict[str, DegenCertificate] = {}
    try:
        for name, cert in search_all_bases(catalog, budget, threads).items():
            lib.store(name, cert)
            certs[name] = cert
        for name, build in COMPOSED.items():
            certs[name] = build(lib)
    except ToricError as exc:
        raise GoldenError(f"regeneration failed: {exc}") from exc
    written = []
    for name in sorted(certs):
        cert = certs[name]
        report = verify_certificate(DegenCertificate.loads(cert.dumps()), catalog)
        if not report.valid:
            raise GoldenError(f"{name} fails verification: {', '.join(report.failures)}")
        path = out / artifact_filename(name)
        path.write_text(cert.dumps())
        written.append(path)
        if log:
            log(f"{path.name}: r={report.special_count} e={report.uncovered_count}")
    return written
