from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
nonzero_fractions = small_fractions.filter(lambda q: q != 0)
primes = st.sampled_from([2, 3, 5, 7, 11, 13])


def fractions_list(min_size=1, max_size=8):
    return st.lists(small_fractions, min_size=min_size, max_size=max_size)


F = Fraction
