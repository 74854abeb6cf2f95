import pytest
from hypothesis import settings

from gqg.cli import PRESETS
from gqg.lattice import Bicharacter
from gqg.scalars import Field, parse_scalar

settings.register_profile("gqg", deadline=None, max_examples=60)
settings.load_profile("gqg")

QT = Field.rational()
Z3 = Field.cyclotomic(3)


def preset_chi(name):
    fobj, q = PRESETS[name]
    fld = Field.cyclotomic(fobj["cyclotomic"]) if "cyclotomic" in fobj else Field.rational()
    return Bicharacter([[parse_scalar(x, fld) for x in r] for r in q], fld)


@pytest.fixture(params=sorted(PRESETS))
def preset(request):
    return request.param, preset_chi(request.param)
