import pytest

from orthoforge import build_lattice, corpus, generate


@pytest.fixture(scope="session")
def corpus_specs():
    return corpus()


@pytest.fixture(scope="session")
def corpus_lattices(corpus_specs):
    return [(name, build_lattice(spec)) for name, spec in corpus_specs]


@pytest.fixture(scope="session")
def b2():
    return build_lattice(generate("boolean", 2))


@pytest.fixture(scope="session")
def b3():
    return build_lattice(generate("boolean", 3))


@pytest.fixture(scope="session")
def mo2():
    return build_lattice(generate("mo", 2))


BOWTIE_DOC = (
    '{"elements": ["x", "y", "a", "b"],'
    ' "covers": [["a", "x"], ["a", "y"], ["b", "x"], ["b", "y"]]}'
)


@pytest.fixture(scope="session")
def bowtie_doc():
    return BOWTIE_DOC
