"""Hypothesis strategies for random schema-valid structured intents.

The generator stays inside the canonical text grammar so serialize -> parse
must be the identity: labels never look like quantities, free-form metric
names never collide with the metric lexicon, and every value is exactly
representable by the canonical number rendering.
"""

from hypothesis import strategies as st

from intent_gateway.intents import (
    METRIC_UNIT,
    Kpi,
    StructuredNetworkIntent,
)

_LEXICON_NEEDLES = (
    "packet loss",
    "data rate",
    "throughput",
    "bandwidth",
    "bit rate",
    "rsrp",
    "sinr",
    "resolution",
    "delay",
    "latency",
    "rtt",
)

_WORDS = ("Alpha", "Beta", "Gamma", "Kappa", "Omni", "Prime", "Vector", "Zonal")

_QUALIFIERS = (None, "TCP", "UDP", "downlink", "uplink", "peak")

scenario_names = st.sampled_from(
    ("4K On Demand Video", "3K Cloud VR (Game)", "Urban macro", "Airplanes connectivity", "Edge AR")
)

_other_names = st.lists(st.sampled_from(_WORDS), min_size=1, max_size=3).map(" ".join).filter(
    lambda name: all(needle not in name.lower() for needle in _LEXICON_NEEDLES)
)

_label_values = st.lists(st.sampled_from(("alpha", "beta", "ultra", "low", "best")), min_size=1, max_size=2).map(
    " ".join
)

_comparators = st.sampled_from(("eq", "lt", "le", "gt", "ge"))

_powers_of_ten = st.integers(min_value=-9, max_value=-1).map(lambda k: float(f"1e{k}"))

_decimals = st.integers(min_value=1, max_value=500000).map(lambda n: n / 100.0)


@st.composite
def kpis(draw):
    metric = draw(
        st.sampled_from(
            ("downlink_throughput", "rtt_delay", "packet_loss_rate", "resolution", "rsrp", "sinr", "other")
        )
    )
    qualifier = draw(st.sampled_from(_QUALIFIERS))
    comparator = draw(_comparators)
    if metric == "resolution":
        return Kpi("resolution", "eq", draw(st.sampled_from(("3K", "4K", "8K", "1080p"))), "label", qualifier)
    if metric == "other":
        name = draw(_other_names)
        if draw(st.booleans()):
            return Kpi(name, "eq", draw(_label_values), "label", qualifier)
        return Kpi(name, comparator, draw(_decimals), draw(st.sampled_from(("Mbps", "ms", "dBm", "dB", "dimensionless"))), qualifier)
    if metric == "downlink_throughput":
        value = float(draw(st.integers(min_value=1, max_value=10000)))
    elif metric == "rtt_delay":
        value = float(draw(st.integers(min_value=1, max_value=500)))
    elif metric == "packet_loss_rate":
        value = draw(_powers_of_ten)
    elif metric == "rsrp":
        value = float(draw(st.integers(min_value=-150, max_value=-1)))
    else:  # sinr
        value = float(draw(st.integers(min_value=-20, max_value=20)))
    return Kpi(metric, comparator, value, METRIC_UNIT[metric], qualifier)


@st.composite
def structured_intents(draw):
    scenario = draw(scenario_names)
    items = draw(st.lists(kpis(), min_size=1, max_size=8))
    unique = {}
    for kpi in items:
        unique[(kpi.metric, kpi.qualifier)] = kpi
    return StructuredNetworkIntent(scenario_type=scenario, kpis=tuple(unique.values()))
