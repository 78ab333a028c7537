import math

import pytest

from uavcap import DetectionSpec, RadarLinkParams, SensingRegion, parse_config


@pytest.fixture
def reference_region() -> SensingRegion:
    return SensingRegion(max_range=1.0, radius_ratio=10.0, max_elevation=math.pi / 5.0)


@pytest.fixture
def reference_link() -> RadarLinkParams:
    return RadarLinkParams()


@pytest.fixture
def reference_spec() -> DetectionSpec:
    return DetectionSpec()


@pytest.fixture
def reference_config():
    return parse_config()
