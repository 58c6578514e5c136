"""Structured network intent schema, text parser, and validator.

The canonical text layout mirrors the ground-truth rows of the service
catalog::

    Scenario Type: <name>, Key Performance Factors: <factor>: <value>, ...

``parse_structured_intent`` turns model output in that layout into a
:class:`StructuredNetworkIntent`; ``serialize_intent`` is its inverse on the
value level (parse(serialize(x)) == x up to provenance). Values recognize
comparators (<, <=, >, >=), scientific notation (10^-3 and 10^{-3}),
percentages, units (Mbps, ms, dBm, dB), and parenthesized qualifiers such as
(TCP) or (downlink); one item may carry several value groups and then yields
several KPIs. Anything that does not scan as a quantity is kept verbatim as
a label KPI and left to validation.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from intent_gateway.errors import SchemaViolation

KNOWN_METRICS = frozenset(
    {"downlink_throughput", "rtt_delay", "packet_loss_rate", "resolution", "rsrp", "sinr"}
)

COMPARATORS = frozenset({"eq", "lt", "le", "gt", "ge"})

UNITS = frozenset({"Mbps", "ms", "dimensionless", "dBm", "dB", "label"})

METRIC_DISPLAY = {
    "downlink_throughput": "Data Rate/Throughput",
    "rtt_delay": "Delay",
    "packet_loss_rate": "Packet Loss Rate",
    "resolution": "Resolution",
    "rsrp": "Coverage Level CSI RSRP",
    "sinr": "Coverage Quality CSI SINR",
}

METRIC_UNIT = {
    "downlink_throughput": "Mbps",
    "rtt_delay": "ms",
    "packet_loss_rate": "dimensionless",
    "resolution": "label",
    "rsrp": "dBm",
    "sinr": "dB",
}

# ordered: first match decides the metric
_METRIC_LEXICON = (
    ("packet loss", "packet_loss_rate"),
    ("data rate", "downlink_throughput"),
    ("throughput", "downlink_throughput"),
    ("bandwidth", "downlink_throughput"),
    ("bit rate", "downlink_throughput"),
    ("rsrp", "rsrp"),
    ("sinr", "sinr"),
    ("resolution", "resolution"),
    ("delay", "rtt_delay"),
    ("latency", "rtt_delay"),
    ("rtt", "rtt_delay"),
)

_COMPARATOR_SYMBOLS = {"lt": "<", "le": "<=", "gt": ">", "ge": ">="}

_SCENARIO_RE = re.compile(r"scenario\s*type\s*:\s*", re.IGNORECASE)
_KPF_HEADER_RE = re.compile(r"key performance[^:]*:\s*", re.IGNORECASE)
_BULLET_RE = re.compile(r"^\s*(?:[-•*]+|\d+\s*[.)])\s*")
_NAME_QUALIFIER_RE = re.compile(r"\s*\(([A-Za-z][\w/-]*)\)\s*$")

_CMP_RE = re.compile(r"(<=|>=|<|>)")
_SCI_RE = re.compile(r"10\^\{?([-+]?\d+)\}?")
_NUMBER_RE = re.compile(r"[-+]?\d+(?:\.\d+)?")
_UNIT_RE = re.compile(r"(Mbps|ms|dBm|dB|%)(?![A-Za-z])", re.IGNORECASE)
_QUALIFIER_RE = re.compile(r"\(([A-Za-z][\w/-]*)\)")
_RTT_RE = re.compile(r"RTT\b\s*", re.IGNORECASE)

_UNIT_CANONICAL = {"mbps": "Mbps", "ms": "ms", "dbm": "dBm", "db": "dB"}


@dataclass(frozen=True)
class Kpi:
    metric: str  # known metric token, or the raw factor name
    comparator: str  # eq | lt | le | gt | ge
    value: float | str  # float for quantities, str for labels
    unit: str  # Mbps | ms | dimensionless | dBm | dB | label
    qualifier: str | None = None

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "comparator": self.comparator,
            "value": self.value,
            "unit": self.unit,
            "qualifier": self.qualifier,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Kpi":
        return cls(
            metric=data["metric"],
            comparator=data["comparator"],
            value=data["value"],
            unit=data["unit"],
            qualifier=data.get("qualifier"),
        )


@dataclass(frozen=True)
class StructuredNetworkIntent:
    scenario_type: str
    kpis: tuple[Kpi, ...]
    provenance: tuple[str, ...] = ()
    raw_model_output: str = ""

    def to_dict(self) -> dict:
        return {
            "scenario_type": self.scenario_type,
            "kpis": [kpi.to_dict() for kpi in self.kpis],
            "provenance": list(self.provenance),
        }

    def same_content(self, other: "StructuredNetworkIntent") -> bool:
        """Field-for-field equality of scenario and KPIs, ignoring provenance."""
        return self.scenario_type == other.scenario_type and self.kpis == other.kpis


@dataclass(frozen=True)
class FreeTextAnswer:
    """Unparseable model output, preserved verbatim for evaluation."""

    text: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"valid": self.valid, "violations": list(self.violations)}


def _normalize_symbols(text: str) -> str:
    return (
        text.replace("−", "-")  # unicode minus
        .replace("≤", "<=")
        .replace("≥", ">=")
    )


def _metric_for_name(name: str) -> str:
    lowered = name.lower()
    for needle, metric in _METRIC_LEXICON:
        if needle in lowered:
            return metric
    return name


@dataclass
class _Scanner:
    text: str
    pos: int = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def take(self, pattern: re.Pattern) -> re.Match | None:
        self.skip_ws()
        m = pattern.match(self.text, self.pos)
        if m:
            self.pos = m.end()
        return m

    @property
    def exhausted(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


@dataclass
class _ValueGroup:
    comparator: str
    value: float
    unit: str
    qualifier: str | None


def _scan_value(value_text: str) -> list[_ValueGroup] | None:
    """Scan a value as one or more quantity groups; None if it is a label."""
    scanner = _Scanner(value_text)
    scanner.take(_RTT_RE)
    groups: list[_ValueGroup] = []
    while not scanner.exhausted:
        cmp_match = scanner.take(_CMP_RE)
        comparator = {"<": "lt", "<=": "le", ">": "gt", ">=": "ge"}.get(
            cmp_match.group(1) if cmp_match else "", "eq"
        )
        sci = scanner.take(_SCI_RE)
        if sci:
            value = float(f"1e{int(sci.group(1))}")
        else:
            num = scanner.take(_NUMBER_RE)
            if not num:
                return None
            value = float(num.group(0))
        unit_match = scanner.take(_UNIT_RE)
        if unit_match:
            token = unit_match.group(1)
            if token == "%":
                value /= 100.0
                unit = "dimensionless"
            else:
                unit = _UNIT_CANONICAL[token.lower()]
        else:
            unit = "dimensionless"
        qual_match = scanner.take(_QUALIFIER_RE)
        qualifier = qual_match.group(1) if qual_match else None
        groups.append(_ValueGroup(comparator, value, unit, qualifier))
    return groups or None


def _split_items(region: str) -> list[str]:
    items = []
    for piece in re.split(r"[,\n]", region):
        cleaned = _BULLET_RE.sub("", piece).strip()
        if cleaned:
            items.append(cleaned)
    return items


def parse_structured_intent(text: str) -> StructuredNetworkIntent:
    """Parse model output into a structured intent.

    Raises SchemaViolation when the scenario header is missing, no KPI
    parses, a value is empty, an item lacks the ``name: value`` shape, or
    two KPIs share (metric, qualifier).
    """
    normalized = _normalize_symbols(text)
    header = _SCENARIO_RE.search(normalized)
    if not header:
        raise SchemaViolation("missing 'Scenario Type:' header")
    after = normalized[header.end() :]
    boundary = re.search(r"[,\n]", after)
    scenario = (after[: boundary.start()] if boundary else after).strip().rstrip(".")
    if not scenario:
        raise SchemaViolation("empty scenario type")
    region = after[boundary.end() :] if boundary else ""
    kpf = _KPF_HEADER_RE.search(region)
    if kpf:
        region = region[kpf.end() :]

    kpis: list[Kpi] = []
    seen: set[tuple[str, str | None]] = set()
    for item in _split_items(region):
        name, sep, value_text = item.partition(":")
        if not sep:
            raise SchemaViolation(f"item {item!r} is not 'name: value'")
        name = name.strip()
        value_text = value_text.strip().rstrip(".")
        if not name or not value_text:
            raise SchemaViolation(f"item {item!r} has an empty name or value")

        name_qualifier = None
        qual = _NAME_QUALIFIER_RE.search(name)
        if qual:
            name_qualifier = qual.group(1)
            name = name[: qual.start()].strip()
        metric = _metric_for_name(name)

        groups = _scan_value(value_text)
        if groups is None:
            parsed = [Kpi(metric, "eq", value_text, "label", name_qualifier)]
        else:
            parsed = [
                Kpi(metric, g.comparator, g.value, g.unit, g.qualifier or name_qualifier)
                for g in groups
            ]
        for kpi in parsed:
            key = (kpi.metric, kpi.qualifier)
            if key in seen:
                raise SchemaViolation(f"duplicate KPI for {key}")
            seen.add(key)
            kpis.append(kpi)

    if not kpis:
        raise SchemaViolation("no KPIs found")
    return StructuredNetworkIntent(
        scenario_type=scenario, kpis=tuple(kpis), raw_model_output=text
    )


def format_value(value: float, power_of_ten: bool = True) -> str:
    """Canonical number rendering: ints bare, powers of ten below 1 as 10^k."""
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    if power_of_ten and 0 < value < 1:
        exponent = round(math.log10(value))
        if float(f"1e{exponent}") == value:
            return f"10^{exponent}"
    rendered = repr(value)
    if "e" in rendered or "E" in rendered:
        rendered = f"{value:.12f}".rstrip("0").rstrip(".")
    return rendered


def serialize_kpi(kpi: Kpi) -> str:
    name = METRIC_DISPLAY.get(kpi.metric, kpi.metric)
    if kpi.qualifier:
        name = f"{name} ({kpi.qualifier})"
    if kpi.unit == "label":
        return f"{name}: {kpi.value}"
    parts = []
    if kpi.metric == "rtt_delay":
        parts.append("RTT")
    if kpi.comparator != "eq":
        parts.append(_COMPARATOR_SYMBOLS[kpi.comparator])
    rendered = format_value(float(kpi.value), power_of_ten=kpi.unit == "dimensionless")
    if kpi.unit != "dimensionless":
        rendered = f"{rendered} {kpi.unit}"
    parts.append(rendered)
    return f"{name}: {' '.join(parts)}"


def serialize_intent(intent: StructuredNetworkIntent) -> str:
    items = ", ".join(serialize_kpi(kpi) for kpi in intent.kpis)
    return f"Scenario Type: {intent.scenario_type}, Key Performance Factors: {items}"


def validate(intent: StructuredNetworkIntent) -> ValidationReport:
    """Report invariant violations; an empty report means the intent is valid."""
    violations: list[str] = []
    if not intent.scenario_type.strip():
        violations.append("scenario_type is empty")
    if not intent.kpis:
        violations.append("intent has no KPIs")

    seen: dict[tuple[str, str | None], Kpi] = {}
    for kpi in intent.kpis:
        label = METRIC_DISPLAY.get(kpi.metric, kpi.metric)
        key = (kpi.metric, kpi.qualifier)
        if key in seen:
            if seen[key].value != kpi.value:
                violations.append(
                    f"conflicting values for {label}"
                    f"{f' ({kpi.qualifier})' if kpi.qualifier else ''}:"
                    f" {seen[key].value} vs {kpi.value}"
                )
            else:
                violations.append(f"duplicate KPI for {label}")
        else:
            seen[key] = kpi

        if kpi.comparator not in COMPARATORS:
            violations.append(f"{label}: unknown comparator {kpi.comparator!r}")
        if kpi.unit not in UNITS:
            violations.append(f"{label}: unknown unit {kpi.unit!r}")
        expected_unit = METRIC_UNIT.get(kpi.metric)
        if expected_unit and kpi.unit != expected_unit:
            violations.append(f"{label}: unit {kpi.unit!r} inconsistent, expected {expected_unit!r}")

        if isinstance(kpi.value, (int, float)):
            if kpi.metric == "downlink_throughput" and kpi.value <= 0:
                violations.append(f"{label}: throughput must be positive, got {kpi.value}")
            if kpi.metric == "rtt_delay" and kpi.value <= 0:
                violations.append(f"{label}: delay must be positive, got {kpi.value}")
            if kpi.metric == "packet_loss_rate" and not 0 < kpi.value <= 1:
                violations.append(f"{label}: packet_loss_rate must lie in (0, 1], got {kpi.value}")
        elif kpi.unit != "label":
            violations.append(f"{label}: non-numeric value {kpi.value!r} requires unit 'label'")

    return ValidationReport(violations=tuple(violations))
