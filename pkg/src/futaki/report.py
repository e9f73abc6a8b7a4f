"""Full check pipeline and the report document (JSON and text)."""

from __future__ import annotations

import json

from .asymptotics import fut_expansion, positivity_certificate
from .bundle import (
    CheckInput,
    MalformedInput,
    build_central_fiber,
    derive_invariants,
    normalize_slope_zero,
    validate_polarization,
)
from .equirr import algebraic_relative_futaki
from .exactnum import Q, qstr
from .moments import moment_table_closed, moment_table_direct, tables_equal
from .relative import Certificate, Sign, Verdict, futaki_value, relative_futaki

VERDICT_TEXT = {
    Verdict.NOT_DESTABILIZED: "L does not destabilize U0",
    Verdict.DESTABILIZED: "L destabilizes U0: bundle not relatively K-polystable for this test configuration",
    Verdict.BORDERLINE: "borderline",
}

VERDICT_LINE = {
    Verdict.NOT_DESTABILIZED: "NOT destabilized",
    Verdict.DESTABILIZED: "DESTABILIZED",
    Verdict.BORDERLINE: "borderline",
}

GENUS_ZERO_NOTE = "genus 0: outside theorem hypotheses (the sign statements assume g >= 1)"


def _slope_comparison(mu_L, mu_U) -> str:
    if mu_L < mu_U:
        return "mu(L) < mu(U0)"
    if mu_L > mu_U:
        return "mu(L) > mu(U0)"
    return "mu(L) = mu(U0)"


def check(ci: CheckInput, expansion_order: int = 5) -> dict:
    """Run every stage for one input and return the JSON-ready report."""
    if ci.polarization is None:
        raise MalformedInput("missing 'polarization'")
    cf = build_central_fiber(ci.bundle, ci.destabilizer)
    m = validate_polarization(cf, ci.polarization).m
    inv = derive_invariants(cf)

    table = moment_table_closed(inv, m)
    fr = relative_futaki(table, inv)
    certs = list(fr.certificates)
    certs.append(Certificate("moment routes agree", tables_equal(table, moment_table_direct(inv, m))))

    cf_n, c_n = normalize_slope_zero(cf, m)
    inv_n = derive_invariants(cf_n)
    twisted = futaki_value(moment_table_closed(inv_n, c_n))
    certs.append(Certificate("twist invariance", twisted == fr.value, f"normalized c = {qstr(c_n)}"))

    exp = fut_expansion(inv_n, expansion_order)
    asym = {
        "normalized_c": qstr(c_n),
        "slope_shift": qstr(inv.mu_V),
        "fut1": qstr(exp.fut1),
        "fut2": qstr(exp.fut2),
        "higher": [qstr(x) for x in exp.higher],
        "order": expansion_order,
    }
    if inv.ell >= 2:
        pc = positivity_certificate(inv_n, c_n)
        asym["positivity"] = pc.to_json()
        asym["positivity"]["positive"] = pc.positive
        if inv.genus >= 1:
            certs.append(Certificate("positivity argument", pc.positive, pc.case))

    rr = algebraic_relative_futaki(inv, m, table)
    rr_json = {"match": rr.match, "ratio": None if rr.normalized_ratio is None else qstr(rr.normalized_ratio)}
    rr_json["raw_ratio"] = None if rr.ratio is None else qstr(rr.ratio)
    rr_json["algebraic_value"] = qstr(rr.value)

    target = ci.bundle.summands[ci.destabilizer.target_index]
    mu_L, mu_U = inv.mu[1], target.slope
    notes = []
    if inv.genus == 0:
        notes.append(GENUS_ZERO_NOTE)

    return {
        "input": {
            "genus": inv.genus,
            "summands": [{"rank": s.rank, "degree": qstr(s.degree)} for s in ci.bundle.summands],
            "destabilizer": {
                "target": ci.destabilizer.target_index,
                "rank": ci.destabilizer.sub_rank,
                "degree": qstr(Q(ci.destabilizer.sub_degree)),
            },
            "polarization": qstr(m),
        },
        "central_fiber": [
            {"rank": r, "degree": qstr(d), "slope": qstr(s)} for r, d, s in zip(inv.ranks, inv.degrees, inv.mu)
        ],
        "value": qstr(fr.value),
        "sign": fr.sign.value,
        "verdict": fr.verdict.value,
        "verdict_text": VERDICT_TEXT[fr.verdict],
        "slopes": {
            "mu_L": qstr(mu_L),
            "mu_U0": qstr(mu_U),
            "mu_0_minus_mu_1": qstr(inv.mu[0] - inv.mu[1]),
            "comparison": _slope_comparison(mu_L, mu_U),
        },
        "extremal": {"a0": qstr(fr.extremal.a0), "a": [qstr(x) for x in fr.extremal.a]},
        "certificates": [c.to_json() for c in certs],
        "asymptotics": asym,
        "rr_crosscheck": rr_json,
        "notes": notes,
    }


def report_ok(report: dict) -> bool:
    return report["rr_crosscheck"]["match"] and all(c["ok"] for c in report["certificates"])


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def parse_report(text: str) -> dict:
    return json.loads(text)


def render_text(report: dict) -> str:
    """Stable line-oriented rendering; rationals stay exact."""
    inp = report["input"]
    lines = [
        f"genus: {inp['genus']}",
        f"polarization: {inp['polarization']}",
        "central fiber: " + ", ".join(f"({s['rank']}, {s['degree']})" for s in report["central_fiber"]),
        f"value: {report['value']}",
        f"sign: {report['sign']}",
        f"verdict: {VERDICT_LINE[Verdict(report['verdict'])]}",
        f"verdict text: {report['verdict_text']}",
        f"slopes: mu(L) = {report['slopes']['mu_L']}, mu(U0) = {report['slopes']['mu_U0']} "
        f"({report['slopes']['comparison']})",
        "extremal: a0 = " + report["extremal"]["a0"] + "".join(
            f", a{j + 2} = {x}" for j, x in enumerate(report["extremal"]["a"])
        ),
    ]
    for c in report["certificates"]:
        mark = "ok" if c["ok"] else "FAILED"
        detail = f" ({c['detail']})" if c["detail"] else ""
        lines.append(f"certificate {c['name']}: {mark}{detail}")
    asym = report.get("asymptotics")
    if asym:
        lines.append(f"Fut1: {asym['fut1']}")
        lines.append(f"Fut2: {asym['fut2']}")
        for i, x in enumerate(asym["higher"]):
            lines.append(f"Fut{i + 3}: {x}")
        pos = asym.get("positivity")
        if pos:
            lines.append(f"positivity at c = {pos['c']}: {'ok' if pos['positive'] else 'FAILED'} (case {pos['case']})")
    rr = report["rr_crosscheck"]
    if rr["match"]:
        lines.append(f"RR cross-check: ok (ratio {rr['ratio']})")
    else:
        lines.append(f"RR CROSS-CHECK FAILED (ratio {rr['ratio']})")
    for note in report.get("notes", []):
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


def scan_rows(ci: CheckInput, c_values) -> list[dict]:
    """(c, value, sign) per point; inadmissible points are kept as skipped rows."""
    cf = build_central_fiber(ci.bundle, ci.destabilizer)
    inv = derive_invariants(cf)
    rows = []
    for c in c_values:
        c = Q(c)
        if not c > inv.max_slope:
            rows.append({"c": qstr(c), "skipped": "inadmissible"})
            continue
        v = futaki_value(moment_table_closed(inv, c))
        rows.append({"c": qstr(c), "value": qstr(v), "sign": Sign.of(v).value})
    return rows


def render_scan(rows: list[dict]) -> str:
    out = []
    for row in rows:
        if "skipped" in row:
            out.append(f"{row['c']}\tskipped: inadmissible")
        else:
            out.append(f"{row['c']}\t{row['value']}\t{row['sign']}")
    return "\n".join(out) + "\n"
