import pytest

from intent_gateway import sampledata
from intent_gateway.baselines import vanilla_ingest
from intent_gateway.corpus import ingest_documents
from intent_gateway.gateway import ModelGateway
from intent_gateway.intents import parse_structured_intent
from intent_gateway.refinement import DomainInstruction, build_catalog


@pytest.fixture(scope="session")
def gateway():
    return ModelGateway()


@pytest.fixture(scope="session")
def sample_docs():
    return sampledata.sample_documents()


@pytest.fixture(scope="session")
def sample_index(sample_docs, gateway):
    return ingest_documents(sample_docs, gateway)


@pytest.fixture(scope="session")
def sample_vanilla_index(sample_docs, gateway):
    return vanilla_ingest(sample_docs, gateway)


@pytest.fixture(scope="session")
def sample_catalog(sample_index, gateway):
    return build_catalog(sample_index, DomainInstruction(), gateway)


@pytest.fixture(scope="session")
def gt_4k():
    return parse_structured_intent(sampledata.GROUND_TRUTH_4K)


@pytest.fixture(scope="session")
def gt_vr():
    return parse_structured_intent(sampledata.GROUND_TRUTH_VR)
