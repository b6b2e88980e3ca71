import pytest

from explorable import GeneratorConfig, gen_named_fixture, gen_random


@pytest.fixture
def fig2():
    return gen_named_fixture('fig2').instance


@pytest.fixture
def fig3l():
    return gen_named_fixture('fig3l').instance


@pytest.fixture
def fig3r():
    return gen_named_fixture('fig3r').instance


@pytest.fixture
def fig4():
    return gen_named_fixture('fig4').instance


@pytest.fixture
def static_fixtures(fig2, fig3l, fig3r, fig4):
    return [fig2, fig3l, fig3r, fig4]


def random_instances(count, seed=0, **params):
    """Seeded instances, one per seed seed..seed+count-1."""
    return [gen_random(GeneratorConfig(seed=seed + offset, **params)) for offset in range(count)]


def corrupted_suite(count, family='hypergraph', levels=(0.0, 0.25, 1.0), corruption='flip', **params):
    """Instances cycling through the corruption levels."""
    suite = []
    for offset in range(count):
        level = levels[offset % len(levels)]
        suite.append(
            gen_random(GeneratorConfig(family=family, corruption=corruption, level=level, seed=offset, **params))
        )
    return suite
