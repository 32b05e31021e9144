from hypothesis import HealthCheck, settings

settings.register_profile("desk", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("desk")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for i, (ok, detail) in sorted(RESULTS.items()):
        terminalreporter.write_line(f"criterion {i}: {'PASS' if ok else 'FAIL'} {detail}")
