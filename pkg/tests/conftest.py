from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=50,
    deadline=None,
    derandomize=True,  # the whole suite stays deterministic run to run
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")
