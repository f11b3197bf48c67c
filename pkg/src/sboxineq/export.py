"""Model files: appendix-style text, JSON and LP constraint blocks."""

from __future__ import annotations

import json
import re
from pathlib import Path

from .exceptions import CertificationError, DimensionError, ValidationError
from .inequality import Inequality, from_json, parse_text, to_json, to_text, variable_names
from .sbox import SBox, Transitions, transitions_of
from .verify import certify_model

FORMATS = ("appendix-text", "json", "lp-constraints")


def render_model(inequalities, n: int, fmt: str = "appendix-text", *, sbox: SBox | None = None) -> str:
    inequalities = list(inequalities)
    if fmt == "appendix-text":
        head = [f"# n={n} inequalities={len(inequalities)}"]
        if sbox is not None:
            head.append(f"# sbox={sbox.hex().replace(' ', ',')}")
        return "\n".join(head + [to_text(q) for q in inequalities]) + "\n"
    if fmt == "json":
        payload = {"n": n, "size": len(inequalities)}
        if sbox is not None:
            payload["sbox"] = list(sbox.table)
        payload["inequalities"] = [to_json(q) for q in inequalities]
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "lp-constraints":
        names = variable_names(n)
        lines = ["Subject To"]
        for i, q in enumerate(inequalities):
            terms = " ".join(
                f"{'-' if a < 0 else '+'} {abs(a)} {name}" for a, name in zip(q.coeffs, names) if a
            )
            lines.append(f" q{i}: {terms} >= {-q.constant}")
        lines.append("Binary")
        lines.append(" " + " ".join(names))
        lines.append("End")
        return "\n".join(lines) + "\n"
    raise ValidationError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")


def parse_model(text: str, n: int | None = None) -> list[Inequality]:
    """Read any of the three formats back into inequalities."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        obj = json.loads(text)
        if n is not None and obj.get("n", n) != n:
            raise DimensionError(f"model is for n={obj['n']}, expected n={n}")
        return [from_json(q) for q in obj["inequalities"]]
    header = re.search(r"#\s*n=(\d+)", text)
    if header and n is None:
        n = int(header.group(1))
    out = []
    in_lp = False
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith(("#", "\\")):
            continue
        low = line.lower()
        if low in ("subject to", "st", "s.t."):
            in_lp = True
            continue
        if low in ("binary", "binaries", "end", "bounds", "general"):
            in_lp = False
            continue
        if ">=" not in line and "<=" not in line and "≥" not in line and "≤" not in line:
            if in_lp or re.fullmatch(r"[xy\d\s]+", line):
                continue
            raise ValidationError(f"cannot parse model line {line!r}")
        line = re.sub(r"^\s*[A-Za-z_]\w*\s*:", "", line)
        out.append(parse_text(line, n))
    return out


def write_model(path, inequalities, sbox: SBox | Transitions, fmt: str | None = None) -> Path:
    """Certify, then write.  Nothing is written for a failing model."""
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "lp-constraints" if path.suffix == ".lp" else "appendix-text")
    tr = sbox if isinstance(sbox, Transitions) else transitions_of(sbox)
    inequalities = list(inequalities)
    report = certify_model(tr, inequalities)
    if not report.passed:
        raise CertificationError("refusing to write an uncertified model:\n" + report.to_text())
    text = render_model(inequalities, tr.n, fmt, sbox=sbox if isinstance(sbox, SBox) else None)
    path.write_text(text)
    return path


def read_model(path, n: int | None = None) -> list[Inequality]:
    return parse_model(Path(path).read_text(), n)
