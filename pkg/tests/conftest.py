import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,  # special-function calls have erratic first-call latency
    max_examples=40,
    suppress_health_check=[HealthCheck.filter_too_much],
)
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))
