from hypothesis import settings

# keep the suite reproducible run to run
settings.register_profile("repro", derandomize=True, max_examples=40, deadline=None)
settings.load_profile("repro")
