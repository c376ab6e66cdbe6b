"""Problem-description (PD) file parsing, serialization, and command-line
modifiers.

A PD file is UTF-8 text.  Lines starting with ``#`` are comments (outside the
JSON only).  The file contains a ``PD`` marker followed by one JSON object,
either entirely on the marker line or starting on a later line.  After the
JSON, standalone command lines are allowed (``CS``, ``PDC``, ``SER ...``,
``CMD [...]``, or a PD key followed by a JSON value).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

from .errors import PdSyntaxError, PdValidationError
from .exprparse import IDENT_RE, parse_expression, parse_inequality
from .model import (
    MAX_RVS,
    ConstantBound,
    Dependency,
    Independence,
    ProblemDescription,
    SymmetryGroup,
    varset,
)

PD_KEYS = ("RV", "AL", "O", "D", "I", "S", "BC", "BP", "QU", "SE", "CMD", "OPT")
MODIFIER_REPLACE_KEYS = ("RV", "AL", "O", "D", "I", "S", "BC", "BP")
MODIFIER_APPEND_KEYS = ("+RV", "+AL", "+D", "+I", "+S", "+BC", "+BP", "+CMD", "+OPT")
APPEND_OPTION_WHITELIST = ("SER", "PDC", "CS")
EXPERIMENTAL_COMMANDS = ("DESER", "Q", "DESTROY")


@dataclass
class PdDocument:
    pd: ProblemDescription
    trailing_commands: list = field(default_factory=list)


@dataclass
class Modifier:
    """A command-line modifier JSON: plain keys replace a PD section,
    '+'-prefixed keys append to it."""

    replace: dict = field(default_factory=dict)
    append: dict = field(default_factory=dict)


def _reject_duplicate_keys(pairs):
    d = {}
    for k, v in pairs:
        if k in d:
            raise PdSyntaxError(f"duplicate key {k!r} in JSON")
        d[k] = v
    return d


def _loads(text, what):
    try:
        return json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except PdSyntaxError:
        raise
    except json.JSONDecodeError as exc:
        raise PdSyntaxError(f"invalid JSON in {what}: {exc}") from None


def _raw_decode(text):
    dec = json.JSONDecoder(object_pairs_hook=_reject_duplicate_keys)
    return dec.raw_decode(text)


# ---------------------------------------------------------------------------
# raw document: JSON-level sections prior to validation


def empty_raw():
    return {
        "RV": [], "AL": [], "O": None, "D": [], "I": [], "S": [],
        "BC": [], "BP": [], "QU": [], "SE": [], "OPT": [],
    }


def _require_array(key, value):
    if not isinstance(value, list):
        raise PdSyntaxError(f"value of {key!r} must be a JSON array")
    return value


def _require_string_array(key, value):
    arr = _require_array(key, value)
    for v in arr:
        if not isinstance(v, str):
            raise PdSyntaxError(f"every element of {key!r} must be a string")
    return arr


def merge_json_into_raw(raw, obj, *, appending=None):
    """Fold one PD JSON object (or a key-command payload) into a raw document.

    ``appending`` forces append semantics for the given set of keys; by
    default each key replaces its section (first assignment in a fresh raw).
    """
    for key, value in obj.items():
        if key not in PD_KEYS:
            raise PdSyntaxError(f"unknown PD key {key!r}")
        app = appending is not None and key in appending
        if key in ("RV", "AL"):
            arr = _require_string_array(key, value)
            raw[key] = raw[key] + arr if app else list(arr)
        elif key == "O":
            if isinstance(value, list):
                value = _require_string_array(key, value)
                if len(value) != 1:
                    raise PdSyntaxError("'O' takes exactly one expression")
                value = value[0]
            if not isinstance(value, str):
                raise PdSyntaxError("value of 'O' must be a string")
            raw["O"] = value
        elif key in ("D", "I"):
            arr = _require_array(key, value)
            for item in arr:
                if not isinstance(item, dict):
                    raise PdSyntaxError(f"every element of {key!r} must be a JSON object")
                want = {"dependent", "given"} if key == "D" else {"independent", "given"}
                if set(item.keys()) != want:
                    raise PdSyntaxError(
                        f"{key!r} entries need exactly the keys {sorted(want)}"
                    )
                for sub, v in item.items():
                    _require_string_array(f"{key}.{sub}", v)
            raw[key] = raw[key] + arr if app else list(arr)
        elif key == "S":
            arr = _require_array(key, value)
            for row in arr:
                _require_string_array("S row", row)
            raw[key] = raw[key] + arr if app else list(arr)
        elif key in ("BC", "BP", "QU", "SE"):
            arr = _require_string_array(key, value)
            raw[key] = raw[key] + arr if app else list(arr)
        else:  # CMD / OPT, identical meaning
            arr = _require_string_array(key, value)
            raw["OPT"] = raw["OPT"] + arr
    return raw


# ---------------------------------------------------------------------------
# validation: raw -> ProblemDescription


def _validate_names(names, kind):
    seen = set()
    for nm in names:
        if not IDENT_RE.match(nm):
            raise PdValidationError(
                f"{kind} name {nm!r} must be alphanumeric and not begin with a digit"
            )
        if nm in seen:
            raise PdValidationError(f"duplicate {kind} name {nm!r}")
        seen.add(nm)


def _parse_option(token, options, state):
    parts = token.split()
    if not parts:
        raise PdSyntaxError("empty option string")
    name, args = parts[0], parts[1:]
    if name == "?":
        name = "HELP"
    if name == "SER":
        options.add("SER")
        if args:
            if args[0] not in ("-a", "-t") or len(args) != 2:
                raise PdSyntaxError(f"SER takes '-a file' or '-t file', got {token!r}")
            state["ser_target"] = (args[0], args[1])
        return
    if args:
        raise PdSyntaxError(f"option {name!r} takes no arguments")
    if name in ("PDC", "CS", "LP_DISP", "HELP"):
        options.add(name)
        return
    raise PdSyntaxError(f"unknown option {name!r}")


def finalize_raw(raw):
    """Validate a raw document and build the ProblemDescription."""
    rv_names = list(raw["RV"])
    al_names = list(raw["AL"])
    _validate_names(rv_names, "random variable")
    _validate_names(al_names, "LP variable")
    if set(rv_names) & set(al_names):
        both = sorted(set(rv_names) & set(al_names))
        raise PdValidationError(f"names used as both RV and AL: {both}")
    if len(rv_names) > MAX_RVS:
        raise PdValidationError(f"at most {MAX_RVS} random variables are supported")
    rv_index = {nm: k for k, nm in enumerate(rv_names)}
    al_index = {nm: k for k, nm in enumerate(al_names)}

    def rvset(names, where):
        for nm in names:
            if nm not in rv_index:
                raise PdValidationError(f"unknown random variable {nm!r} in {where}")
        if len(set(names)) != len(names):
            raise PdValidationError(f"duplicate random variable in {where}")
        return varset(names, rv_index)

    deps = []
    for item in raw["D"]:
        dep_mask = rvset(item["dependent"], "dependency")
        giv_mask = rvset(item["given"], "dependency")
        if dep_mask & giv_mask:
            warnings.warn(
                "dependency lists a given variable as dependent; dropping the overlap",
                stacklevel=2,
            )
            dep_mask &= ~giv_mask
        if dep_mask == 0:
            raise PdValidationError("dependency with an empty dependent set")
        deps.append(Dependency(dependent=dep_mask, given=giv_mask))

    indeps = []
    for item in raw["I"]:
        names = item["independent"]
        if len(names) < 2:
            raise PdValidationError("independence needs at least two variables")
        for nm in names:
            if nm not in rv_index:
                raise PdValidationError(f"unknown random variable {nm!r} in independence")
        if len(set(names)) != len(names):
            raise PdValidationError("independence lists a variable twice")
        giv_mask = rvset(item["given"], "independence")
        indeps.append(
            Independence(independent=tuple(rv_index[nm] for nm in names), given=giv_mask)
        )

    perms = []
    for row in raw["S"]:
        if sorted(row) != sorted(rv_names):
            raise PdValidationError(
                "symmetry row must contain every random variable exactly once"
            )
        perms.append(tuple(rv_index[nm] for nm in row))
    sym = SymmetryGroup(perms=tuple(perms))

    def bound_list(key):
        out = []
        for src in raw[key]:
            lhs, sense, rhs = parse_inequality(src, rv_index, al_index)
            if abs(lhs.expr.const) > 0:
                raise PdSyntaxError(f"constant terms are not allowed on the left of {src!r}")
            out.append(ConstantBound(lhs=lhs, sense=sense, rhs=rhs, src=src))
        return out

    objective = None
    if raw["O"] is not None:
        objective = parse_expression(raw["O"], rv_index, al_index)

    options: set = set()
    state = {"ser_target": None}
    for token in raw["OPT"]:
        _parse_option(token, options, state)

    return ProblemDescription(
        rv_names=rv_names,
        al_names=al_names,
        objective=objective,
        deps=deps,
        indeps=indeps,
        sym=sym,
        bc=bound_list("BC"),
        bp=bound_list("BP"),
        qu=[parse_expression(s, rv_index, al_index) for s in raw["QU"]],
        se=[parse_expression(s, rv_index, al_index) for s in raw["SE"]],
        options=options,
        ser_target=state["ser_target"],
    )


# ---------------------------------------------------------------------------
# file-level parsing


def _is_comment(line):
    return line.lstrip().startswith("#")


def _process_command_line(raw, line, trailing):
    parts = line.split(None, 1)
    head, rest = parts[0], (parts[1] if len(parts) > 1 else "")
    if head in EXPERIMENTAL_COMMANDS:
        raise PdSyntaxError(f"experimental command {head!r} is not supported")
    if head == "PD":
        raise PdSyntaxError("only one PD block is allowed per file")
    trailing.append(line)
    if head in ("CMD", "OPT"):
        arr = _require_string_array(head, _loads(rest, f"{head} command"))
        raw["OPT"] = raw["OPT"] + arr
        return
    if head in ("SER", "PDC", "CS", "LP_DISP", "?"):
        token = head if not rest else f"{head} {rest}"
        raw["OPT"] = raw["OPT"] + [token]
        return
    if head in ("RV", "AL", "O", "D", "I", "S", "BC", "BP"):
        warnings.warn(
            f"{head!r} used as a standalone command; this form is experimental",
            stacklevel=2,
        )
        value = _loads(rest, f"{head} command")
        merge_json_into_raw(raw, {head: value}, appending={head})
        return
    raise PdSyntaxError(f"unknown command {head!r}")


def parse_file_raw(text):
    """Parse PD text into (raw document, trailing command lines)."""
    lines = text.splitlines()
    k = 0
    while k < len(lines) and (not lines[k].strip() or _is_comment(lines[k])):
        k += 1
    if k >= len(lines):
        raise PdSyntaxError("no PD marker found")
    marker = lines[k].strip()
    is_pd_marker = marker == "PD" or (
        marker.startswith("PD") and marker[2] in " \t{"
    )
    if not is_pd_marker:
        head = marker.split(None, 1)[0]
        if head in EXPERIMENTAL_COMMANDS or head in ("CMD", "OPT", "SER", "PDC", "CS", "?"):
            raise PdSyntaxError(f"command {head!r} given before the PD JSON")
        raise PdSyntaxError("no PD marker found before other content")
    raw = empty_raw()
    rest_of_marker = marker[2:].strip()
    if rest_of_marker:
        try:
            obj, end = _raw_decode(rest_of_marker)
        except json.JSONDecodeError:
            # would it have parsed with the following lines attached?
            tail = "\n".join([rest_of_marker] + lines[k + 1:])
            try:
                _raw_decode(tail)
            except (json.JSONDecodeError, PdSyntaxError):
                raise PdSyntaxError("malformed JSON after the PD marker") from None
            raise PdSyntaxError(
                "the PD JSON may not start on the PD line and continue on later lines"
            ) from None
        if rest_of_marker[end:].strip():
            raise PdSyntaxError("unexpected text after the PD JSON")
        after = lines[k + 1:]
    else:
        j = k + 1
        while j < len(lines) and (not lines[j].strip() or _is_comment(lines[j])):
            j += 1
        if j >= len(lines):
            raise PdSyntaxError("PD marker with no JSON object")
        tail = "\n".join(lines[j:])
        try:
            obj, end = _raw_decode(tail)
        except json.JSONDecodeError as exc:
            raise PdSyntaxError(f"invalid PD JSON: {exc}") from None
        consumed_lines = tail[:end].count("\n") + 1
        after = lines[j + consumed_lines:]
        leftover = tail[end:].split("\n", 1)[0].strip()
        if leftover and not leftover.startswith("#"):
            raise PdSyntaxError(f"unexpected text after the PD JSON: {leftover!r}")
    if not isinstance(obj, dict):
        raise PdSyntaxError("the PD payload must be a JSON object")
    merge_json_into_raw(raw, obj)
    trailing = []
    for line in after:
        if not line.strip() or _is_comment(line):
            continue
        _process_command_line(raw, line.strip(), trailing)
    return raw, trailing


def parse_file(text):
    """Parse a full PD file into a PdDocument."""
    raw, trailing = parse_file_raw(text)
    return PdDocument(pd=finalize_raw(raw), trailing_commands=trailing)


# ---------------------------------------------------------------------------
# serialization


def pd_to_raw(pd):
    """Rebuild the raw JSON-level document from a ProblemDescription."""
    raw = empty_raw()
    raw["RV"] = list(pd.rv_names)
    raw["AL"] = list(pd.al_names)
    raw["O"] = pd.objective.source if pd.objective else None
    raw["D"] = [
        {
            "dependent": [pd.rv_names[b] for b in range(pd.n) if d.dependent >> b & 1],
            "given": [pd.rv_names[b] for b in range(pd.n) if d.given >> b & 1],
        }
        for d in pd.deps
    ]
    raw["I"] = [
        {
            "independent": [pd.rv_names[b] for b in ind.independent],
            "given": [pd.rv_names[b] for b in range(pd.n) if ind.given >> b & 1],
        }
        for ind in pd.indeps
    ]
    raw["S"] = [[pd.rv_names[p] for p in row] for row in pd.sym.perms]
    raw["BC"] = [b.src for b in pd.bc]
    raw["BP"] = [b.src for b in pd.bp]
    raw["QU"] = [q.source for q in pd.qu]
    raw["SE"] = [s.source for s in pd.se]
    raw["OPT"] = sorted(pd.options)
    return raw


def serialize(pd):
    """Emit a PD document that parses back to an equivalent description."""
    raw = pd_to_raw(pd)
    obj = {}
    for key in ("RV", "AL"):
        obj[key] = raw[key]
    if raw["O"] is not None:
        obj["O"] = raw["O"]
    for key in ("D", "I", "S", "BC", "BP", "QU", "SE", "OPT"):
        if raw[key]:
            obj[key] = raw[key]
    return "PD\n" + json.dumps(obj, indent=2) + "\n"


# ---------------------------------------------------------------------------
# command-line modifiers


def parse_modifier(src):
    """Parse one command-line modifier JSON."""
    obj = _loads(src, "command-line modifier")
    if not isinstance(obj, dict):
        raise PdSyntaxError("a command-line modifier must be a JSON object")
    mod = Modifier()
    for key, value in obj.items():
        if key in MODIFIER_REPLACE_KEYS:
            mod.replace[key] = value
        elif key in MODIFIER_APPEND_KEYS:
            mod.append[key] = value
        elif key in ("+O", "CMD", "OPT", "QU", "SE", "+QU", "+SE"):
            raise PdSyntaxError(f"key {key!r} is not allowed in a command-line modifier")
        else:
            raise PdSyntaxError(f"unknown modifier key {key!r}")
    return mod


def apply_modifier(pd, mod):
    """Apply one modifier: replace-keys overwrite the section, '+'-keys append."""
    raw = pd_to_raw(pd)
    for key, value in mod.replace.items():
        raw[key] = [] if key != "O" else None
        merge_json_into_raw(raw, {key: value})
    for pkey, value in mod.append.items():
        key = pkey[1:]
        if key in ("CMD", "OPT"):
            arr = _require_string_array(pkey, value)
            for token in arr:
                name = token.split()[0] if token.split() else token
                if name not in APPEND_OPTION_WHITELIST:
                    raise PdSyntaxError(
                        f"only {list(APPEND_OPTION_WHITELIST)} may be appended via {pkey!r}"
                    )
            raw["OPT"] = raw["OPT"] + arr
            continue
        if key in ("RV", "AL"):
            arr = _require_string_array(pkey, value)
            dups = set(arr) & set(raw[key])
            if dups:
                raise PdValidationError(f"{pkey} would duplicate existing names: {sorted(dups)}")
        merge_json_into_raw(raw, {key: value}, appending={key})
    return finalize_raw(raw)
