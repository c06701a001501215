"""Newton polygons and supersingularity of y^2 - y = f(x) in characteristic 2.

Exact point counting over GF(2^e) decides the L-polynomial and its Newton
polygon; the 2-adic side computes the coefficients C_r of (1 + 4f)^((2^N-1)/2)
and checks the valuation criteria that bound the first slope.
"""
from .gf2 import BinaryField, FieldElement, make_field, embed, embed_bits
from .curves import (
    CurveEquation,
    DegenerateCurveError,
    IsomorphismData,
    apply_isomorphism,
    curve_from_json,
    curve_new,
    kill_coefficient,
    make_monic,
    reduce_odd,
)
from .zeta import (
    LPolynomial,
    NewtonPolygon,
    count_points,
    is_supersingular,
    l_polynomial,
    newton_polygon,
    newton_polygon_of,
    np1,
)
from .twoadic import (
    GaloisRing,
    GaloisRingElement,
    TwoAdicSeries,
    c_series,
    c_series_stable,
    digit_sum,
    lift_curve,
    slope_parameter,
)
from .boxes import box_of, c_r_oracle, check_miracle, enumerate_Kr
from .slopecert import (
    CertificateQuery,
    SlopeBoundReport,
    keylemma_check_i,
    keylemma_check_ii,
    np1_lower_bound,
    schedule_n0,
    theorem3_slope,
)
from .explorer import (
    ClassificationRecord,
    CountCache,
    classify,
    enumerate_normal_forms,
    supersingular_parameter_bound,
    verify_geer,
)

__version__ = "0.1.0"
