import pytest

from growthlab import classification_matrix


@pytest.fixture(scope="session")
def matrix_cells():
    """The 12-cell verdict matrix at canonical settings.

    Several seconds of simulation, so computed once per session and shared.
    """
    return classification_matrix()
