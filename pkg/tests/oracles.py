"""Frozen reference values, each computed independently of the package.

Closed forms are evaluated in double precision; the rest were produced
once with scipy (noted per value) and pasted here so tests never depend on
the code under test for their expected numbers.
"""
import math

# ray c=1, f=1, alpha=beta=1, lambda=10: (1 - e^-10)/10
WATSON_LAMBDA10 = (1.0 - math.exp(-10.0)) / 10.0
# ray c=1, f=1, alpha=1, beta=1/2, lambda=1: lower gamma(1/2, 1) = sqrt(pi) erf(1)
WATSON_HALF = math.sqrt(math.pi) * math.erf(1.0)

# example contour second-order coefficients for a1 = b1 = 0.1
FIG1_A2 = -0.08
FIG1_B2 = -0.04

# PV int_0^40 e^-u / (2 - u) du; scipy quad(weight="cauchy") = 0.6704827097900732,
# e^-2 Ei(2) (upper limit infinity) = 0.6704827097900734
PV_INV2MU = 0.6704827097900732
# half-residue jump for 1/(2-u) at lambda=1, beta0=1: pi e^-2
LIP_GAP_INV2MU = math.pi * math.exp(-2.0)

# int_0^1.5 e^-10u / (1+u) du = e^10 (E1(10) - E1(25)) via scipy.special.exp1
INSTANTON_RAY = 0.09156332215805235
# int_0^1 e^-20u / (1+u) du = e^20 (E1(20) - E1(40)) via scipy.special.exp1
RAY_INV1P_20 = 0.04771854544566021

# B=1, ray c=5, beta0=1, a=0.1: (1 - e^-50)/10
RESUM_CONST = (1.0 - math.exp(-50.0)) / 10.0


def ambiguity_closed_form(lam):
    """Phi_{ray c=2} - Phi_{ray c=1} for f=1: (e^-lam - e^-2lam)/lam."""
    return (math.exp(-lam) - math.exp(-2.0 * lam)) / lam
