"""Bundled sample corpus and evaluation dataset.

A small service-catalog document plus intent/ground-truth pairs, used by the
tests, the demos, and the README quickstart. The document interleaves a KPI
table with prose: the video prose sits next to the table while the VR prose
sits several sentences away, which is what makes the sentence-window
baseline retrieve table-free contexts for the VR intent while the
modality-aware pipeline keeps the table intact.
"""

from __future__ import annotations

import json
from pathlib import Path

from intent_gateway.corpus import RawDocument

SCENARIO_TABLE = """\
Scenario Type | Data Rate/Throughput (downlink) | Delay | Packet Loss Rate | Resolution | Coverage Level CSI RSRP | Coverage Quality CSI SINR
4K On Demand Video | 30 Mbps | RTT < 100 ms | 10^-3 | 4K | -113 dBm | -2 dB
3K Cloud VR (Game) | 100 Mbps | RTT < 25 ms | 10^-3 (TCP) 10^-2 (UDP) | 3K | -107 dBm | 2 dB
Urban macro | 50 Mbps | RTT < 50 ms | 10^-2 | 1080p | -110 dBm | 0 dB
Airplanes connectivity | 15 Mbps | RTT < 200 ms | 10^-2 | 1080p | -120 dBm | -5 dB
"""

SCENARIO_DOC_TEXT = f"""\
Operators describe each supported service scenario in the network planning handbook.
The catalog of service and traffic scenarios below states the key performance factors that radio planners recommend.

{SCENARIO_TABLE}
The 4K On Demand Video scenario targets smooth playback of ultra high definition films.
Subscribers expect the on demand catalog to start instantly without buffering.
Urban macro deployments serve dense city blocks with mixed traffic profiles.
Airplanes connectivity keeps passengers online during cruise through satellite backhaul.
Planners revisit the recommendations whenever a new radio survey lands.
Virtual reality game sessions feel comfortable only when players do not notice motion sickness.
Cloud rendered virtual reality games stream each frame to the headset while the player moves.
Reducing motion sickness in a virtual reality game demands a very low round trip delay.
Players who want to play a virtual reality game without feeling motion sickness should pick the recommended game profile.
Field teams archive every survey in the planning handbook.
Updated recommendations reach the catalog after each review cycle.
"""

GROUND_TRUTH_4K = (
    "Scenario Type: 4K On Demand Video, Key Performance Factors: "
    "Data Rate/Throughput (downlink): 30 Mbps, Delay: RTT < 100 ms, "
    "Packet Loss Rate: 10^-3, Resolution: 4K, Coverage Level CSI RSRP: -113 dBm, "
    "Coverage Quality CSI SINR: -2 dB"
)

GROUND_TRUTH_VR = (
    "Scenario Type: 3K Cloud VR (Game), Key Performance Factors: "
    "Data Rate/Throughput (downlink): 100 Mbps, Delay: RTT < 25 ms, "
    "Packet Loss Rate: 10^-3 (TCP) 10^-2 (UDP), Resolution: 3K, "
    "Coverage Level CSI RSRP: -107 dBm, Coverage Quality CSI SINR: 2 dB"
)

INTENT_4K = "4K On Demand Video"
INTENT_VR = "I want to play a virtual reality game without feeling motion sickness"
INTENT_MOVIE = "I want to watch an on demand movie in 4K without buffering"

SAMPLE_DATASET = (
    {"intent": INTENT_4K, "ground_truth": GROUND_TRUTH_4K},
    {"intent": INTENT_VR, "ground_truth": GROUND_TRUTH_VR},
    {"intent": INTENT_MOVIE, "ground_truth": GROUND_TRUTH_4K},
)

SCENARIO_NAMES = (
    "4K On Demand Video",
    "3K Cloud VR (Game)",
    "Urban macro",
    "Airplanes connectivity",
)


def sample_documents() -> list[RawDocument]:
    return [
        RawDocument(
            id="service-scenarios",
            text=SCENARIO_DOC_TEXT,
            source_uri="bundled:service-scenarios",
            format_hint="markdown-like",
        )
    ]


def write_sample_corpus(directory) -> tuple[Path, Path]:
    """Materialize the corpus and dataset on disk; returns (manifest, dataset)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    doc_path = directory / "service-scenarios.md"
    doc_path.write_text(SCENARIO_DOC_TEXT, encoding="utf-8")
    manifest_path = directory / "manifest.txt"
    manifest_path.write_text(f"{doc_path.name},markdown-like\n", encoding="utf-8")
    dataset_path = directory / "dataset.jsonl"
    dataset_path.write_text(
        "".join(json.dumps(record, ensure_ascii=False) + "\n" for record in SAMPLE_DATASET),
        encoding="utf-8",
    )
    return manifest_path, dataset_path
