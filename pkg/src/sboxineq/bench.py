"""Measured-versus-published tables for the corpus."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ThreadPoolExecutor

from . import corpus
from .greedy import greedy_random_tiebreaker, greedy_reduce
from .hull import hrep_of
from .pipeline import Budget
from .pool import hull_pool, subset_addition_pool
from .setcover import solve_exact
from .sbox import transitions_of

TABLES = ("t1", "t2", "t3", "t4")
K3_ALLOWANCE = 1
TIME_FACTOR = 10.0


def _default_scope(table: str) -> list[str]:
    if table == "t3":
        return [name for name in corpus.names() if corpus.get(name, check=False).value("t3:sagemath")]
    if table == "t4":
        return [name for name in corpus.names(max_n=4) if corpus.get(name, check=False).value("t4:k2-seconds")]
    column = "t1:sagemath" if table == "t1" else "t2:k2"
    return [name for name in corpus.names(max_n=4) if corpus.get(name, check=False).value(column)]


def _cover_size(pool, budget):
    sol = solve_exact(pool.instance(), time_limit=budget.time_limit, node_limit=budget.node_limit)
    return sol.size if sol.optimal else f"{sol.lower_bound}..{sol.upper_bound}", sol.optimal


def _row_t1(entry, tr, budget, restarts, seed):
    hrep = hrep_of(tr, facet_budget=budget.facet_budget)
    pool = hull_pool(hrep, tr)
    plain = greedy_reduce(pool).best_size
    best = greedy_random_tiebreaker(pool, seed=seed, restarts=restarts).best_size
    pub_f, pub_rg = entry.value("t1:sagemath"), entry.value("t1:random-greedy")
    ok = (pub_f is None or len(hrep) == pub_f) and (pub_rg is None or best <= pub_rg + 2)
    return {
        "facets": len(hrep), "equations": len(hrep.equations), "pub_facets": pub_f,
        "greedy": plain, "random_greedy": best, "pub_random_greedy": pub_rg,
        "pub_sun": entry.value("t1:sun"), "pass": ok,
    }


def _row_t2(entry, tr, budget, threads):
    hrep = hrep_of(tr, facet_budget=budget.facet_budget)
    row, ok = {}, True
    raw, _ = _cover_size(hull_pool(hrep, tr), budget)
    pub = entry.value("t2:sasaki-todo")
    row.update(raw=raw, pub_raw=pub)
    ok &= pub is None or raw == pub
    for k in (2, 3):
        pool = subset_addition_pool(tr, hrep, k, threads=threads, max_sums=budget.max_sums)
        size, _ = _cover_size(pool, budget)
        pub = entry.value(f"t2:k{k}")
        row.update({f"k{k}": size, f"pub_k{k}": pub})
        if pub is not None:
            slack = K3_ALLOWANCE if k == 3 else 0
            ok &= isinstance(size, int) and size <= pub + slack
    row["pub_boura_coggia"] = entry.value("t2:boura-coggia")
    row["pass"] = ok
    return row


def _row_t3(entry, tr, budget, threads):
    hrep = hrep_of(tr, facet_budget=budget.facet_budget)
    pub_f = entry.value("t3:sagemath")
    row = {"facets": len(hrep), "pub_facets": pub_f}
    pool = subset_addition_pool(tr, hrep, 2, threads=threads, max_sums=budget.max_sums)
    size, optimal = _cover_size(pool, budget)
    pub = entry.value("t3:k2")
    row.update(k2=size, pub_k2=pub, optimal=optimal)
    row["pass"] = len(hrep) == pub_f and isinstance(size, int) and size <= pub + 1
    return row


def _row_t4(entry, tr, budget, threads):
    hrep = hrep_of(tr, facet_budget=budget.facet_budget)
    row, ok = {}, True
    for k in (2, 3):
        start = time.perf_counter()
        pool = subset_addition_pool(tr, hrep, k, threads=threads, max_sums=budget.max_sums)
        size, _ = _cover_size(pool, budget)
        elapsed = time.perf_counter() - start
        ref = entry.value(f"t4:k{k}-seconds")
        row.update({f"k{k}": size, f"k{k}_seconds": round(elapsed, 3), f"ref_k{k}_seconds": ref})
        ok &= ref is None or elapsed <= TIME_FACTOR * ref
    row["pass"] = ok
    return row


def run_bench(
    table: str,
    scope=None,
    *,
    restarts: int = 1000,
    seed: int = 0,
    threads: int | None = None,
    jobs: int = 1,
    budget: Budget | None = None,
) -> list[dict]:
    """One row per SBox in ``scope`` (default: every entry the table lists)."""
    if table not in TABLES:
        raise ValueError(f"table must be one of {TABLES}")
    budget = budget or Budget()
    names = _default_scope(table) if scope is None else list(scope)

    def one(name):
        entry = corpus.get(name)
        tr = transitions_of(entry.sbox)
        if table == "t1":
            row = _row_t1(entry, tr, budget, restarts, seed)
        elif table == "t2":
            row = _row_t2(entry, tr, budget, threads)
        elif table == "t3":
            row = _row_t3(entry, tr, budget, threads)
        else:
            row = _row_t4(entry, tr, budget, threads)
        return {"sbox": entry.name, **row}

    if jobs <= 1:
        return [one(name) for name in names]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(one, names))


def _cell(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "PASS" if value else "FAIL"
    return str(value)


def format_text(rows: list[dict]) -> str:
    if not rows:
        return "(empty scope)\n"
    cols = list(rows[0])
    cells = [[_cell(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    out = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    out.append("  ".join("-" * w for w in widths))
    out += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    passed = sum(bool(r["pass"]) for r in rows)
    out.append(f"{passed}/{len(rows)} rows pass")
    return "\n".join(out) + "\n"


def format_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]))
        writer.writeheader()
        for r in rows:
            writer.writerow({k: _cell(v) if v is None or isinstance(v, bool) else v for k, v in r.items()})
    return buf.getvalue()
