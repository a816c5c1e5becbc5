from hypothesis import settings

# first calls into jitted kernels include compilation time
settings.register_profile("xhermite", deadline=None, max_examples=60)
settings.load_profile("xhermite")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
