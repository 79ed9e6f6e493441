from scripts.validate_setup import check_packages, check_settings, check_suite


def test_packages_import():
    assert check_packages()


def test_settings_are_consistent():
    assert check_settings()


def test_smoke_suites():
    assert check_suite("calculus")
    assert check_suite("ktheory")
