import os


def test_versions_match() -> None:
    # The pyproject version must equal the version in _version.py.
    version_file_path = os.path.join(os.path.dirname(os.path.dirname(__file__)), "_version.py")
    pyproject_file_path = os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(__file__))), "pyproject.toml")
    assert os.path.isfile(version_file_path)
    assert os.path.isfile(pyproject_file_path)

    with open(version_file_path, "r") as file:
        version_0 = [line for line in file if line.startswith("__version__")][0].split('"')[1]

    version_1 = None
    with open(pyproject_file_path, "r") as file:
        for pyproject_line in file:
            if pyproject_line.startswith("version = "):
                version_1 = pyproject_line.split('"')[1]

    assert version_0 == version_1, "pyproject.toml and shufflesum/_version.py must have matching versions"
