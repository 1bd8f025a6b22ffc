"""Text, LaTeX and JSON emitters for expressions and compact expansions.

Dummy indices are displayed as latin letters a, b, c, ... in order of
first appearance within each term; symbolic output never contains
floating-point numbers, only rational strings.
"""

from __future__ import annotations

from fractions import Fraction

from .colorexpr import ColorExpr, ColorTerm
from .engine import EFormExpansion
from .gaussian import GaussianRational
from .words import Word

_DUMMY_NAMES = "abcdefghijklmnopqrstuvwxyz"

_KIND_TEXT = {"d": "d", "f": "f", "delta": "delta"}
_KIND_LATEX = {"d": "d", "f": "f", "delta": "\\delta"}


def _dummy_names_for(factors) -> dict:
    names: dict = {}
    for _, idx in factors:
        for t in idx:
            if t < 0 and t not in names:
                if len(names) < len(_DUMMY_NAMES):
                    names[t] = _DUMMY_NAMES[len(names)]
                else:
                    names[t] = f"x{len(names)}"
    return names


def _indices_str(idx, names, sep_if_wide=","):
    parts = [str(t) if t > 0 else names[t] for t in idx]
    if all(len(p) == 1 for p in parts):
        return "".join(parts)
    return sep_if_wide.join(parts)


def _frac_str(fr: Fraction) -> str:
    return str(fr)


def _coeff_body(c: GaussianRational, latex: bool) -> str:
    """Magnitude part of a coefficient known to be 'positive' (see
    _is_negative); returns '' for an exact 1."""
    re, im = c.re, c.im
    if im == 0:
        if re == 1:
            return ""
        if latex:
            if re.denominator == 1:
                return str(re.numerator)
            return f"\\frac{{{re.numerator}}}{{{re.denominator}}}"
        return f"({_frac_str(re)})"
    if re == 0:
        num = "i" if im.numerator == 1 else f"{im.numerator}i"
        if latex:
            if im.denominator == 1:
                return num
            return f"\\frac{{{num}}}{{{im.denominator}}}"
        if im.denominator == 1:
            return f"({num})"
        return f"({num}/{im.denominator})"
    body = f"{_frac_str(re)}{'+' if im > 0 else '-'}{_frac_str(abs(im))}i"
    return f"\\left({body}\\right)" if latex else f"({body})"


def _is_negative(c: GaussianRational) -> bool:
    return c.re < 0 or (c.re == 0 and c.im < 0)


def term_text(term: ColorTerm, latex: bool = False) -> str:
    """Unsigned rendering of one term (sign handled by the joiner)."""
    names = _dummy_names_for(term.factors)
    kinds = _KIND_LATEX if latex else _KIND_TEXT
    coeff = -term.coeff if _is_negative(term.coeff) else term.coeff
    body = _coeff_body(coeff, latex)
    sep = "\\," if latex else ","
    factors = "".join(
        f"{kinds[kind]}^{{{_indices_str(idx, names, sep)}}}" for kind, idx in term.factors
    )
    if not factors:
        return body or "1"
    return f"{body} {factors}".strip() if body else factors


def expr_text(expr: ColorExpr, latex: bool = False) -> str:
    if not expr.terms:
        return "0"
    pieces = []
    for i, t in enumerate(expr.terms):
        neg = _is_negative(t.coeff)
        body = term_text(t, latex)
        if i == 0:
            pieces.append(("-" + body) if neg else body)
        else:
            pieces.append(("- " if neg else "+ ") + body)
    return " ".join(pieces)


def expr_latex(expr: ColorExpr) -> str:
    return expr_text(expr, latex=True)


def _coeff_json(c: GaussianRational) -> dict:
    return {"re": str(c.re), "im": str(c.im)}


def _coeff_from_json(obj: dict) -> GaussianRational:
    return GaussianRational(Fraction(obj["re"]), Fraction(obj["im"]))


def expr_json_dict(expr: ColorExpr, trace: Word) -> dict:
    """Stable JSON form: rational strings, per-term dummy ordinals."""
    terms = []
    for t in expr.terms:
        ordinals: dict = {}
        factors = []
        for kind, idx in t.factors:
            indices = []
            for x in idx:
                if x > 0:
                    indices.append({"free": x})
                else:
                    if x not in ordinals:
                        ordinals[x] = len(ordinals) + 1
                    indices.append({"dummy": ordinals[x]})
            factors.append({"kind": kind, "indices": indices})
        terms.append({"coeff": _coeff_json(t.coeff), "factors": factors})
    return {"trace": list(trace.letters), "terms": terms}


def expr_from_json_dict(doc: dict):
    """Inverse of expr_json_dict: returns (trace word, expression)."""
    trace = Word(doc["trace"])
    terms = []
    for tobj in doc["terms"]:
        factors = []
        for fobj in tobj["factors"]:
            idx = []
            for iobj in fobj["indices"]:
                if "free" in iobj:
                    idx.append(int(iobj["free"]))
                else:
                    idx.append(-int(iobj["dummy"]))
            factors.append((fobj["kind"], tuple(idx)))
        terms.append(ColorTerm(_coeff_from_json(tobj["coeff"]), tuple(factors)))
    return trace, ColorExpr(tuple(terms))


def eform_term_text(term, latex: bool = False) -> str:
    e_slots = term.e_slots()
    names = [_DUMMY_NAMES[i] for i in range(len(e_slots))]
    d_parts = [str(x) for x in term.d_letters()] + names
    sep = "\\," if latex else ","
    d_str = (
        "".join(d_parts) if all(len(p) == 1 for p in d_parts) else sep.join(d_parts)
    )
    kinds = _KIND_LATEX if latex else _KIND_TEXT
    pieces = [f"{kinds['d']}^{{{d_str}}}"]
    for w, nm in zip(e_slots, names):
        w_str = str(w) if all(x <= 9 for x in w.letters) else ",".join(map(str, w.letters))
        pieces.append(f"E^{{{w_str}}}_{{{nm}}}" if latex else f"E^{{{w_str}}}_{nm}")
    return "".join(pieces)


def eform_text(x: EFormExpansion, latex: bool = False) -> str:
    return " + ".join(eform_term_text(t, latex) for t in x.terms)


def eform_json_dict(x: EFormExpansion) -> dict:
    terms = []
    for t in x.terms:
        terms.append(
            {
                "weight": str(t.weight),
                "d": list(t.d_letters()),
                "slots": [list(w.letters) for w in t.e_slots()],
            }
        )
    return {"trace": list(x.trace.letters), "terms": terms}
