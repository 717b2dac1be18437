# Expose main classes and services
from app.models.schemas import *
from app.services.complex_kernel import CWSpace, SpaceBuilder, complex_kernel
from app.services.cycle_ribbon import cycle_service
from app.services.algebra import algebra_service
from app.services.proximity import proximity_service
from app.services.fixed_sets import fixed_set_service
from app.services.fixtures import build_fixture
