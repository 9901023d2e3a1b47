"""Reference environments and games used by tests and the CLI.

Matrices are transcribed entry by entry; the ``data/`` directory holds the
same objects in the on-disk formats (regenerate with
``python -m acausal.fixtures``).
"""
from __future__ import annotations

from fractions import Fraction
from importlib import resources
from pathlib import Path

from .ratmat import RatMatrix
from .scenario import DeterministicFunction, EnvironmentProcess, Scenario, format_process_text

TWO_PARTY = Scenario(2, 2)
THREE_PARTY = Scenario(3, 2)

_TWO_PARTY_ROWS = [
    [[1, 1, 1, 1], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
    [[0, 0, 0, 0], [1, 1, 1, 1], [0, 0, 0, 0], [0, 0, 0, 0]],
    [[0, 0, 0, 0], [0, 0, 0, 0], [1, 1, 1, 1], [0, 0, 0, 0]],
    [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [1, 1, 1, 1]],
    [[1, 1, 0, 0], [0, 0, 1, 1], [0, 0, 0, 0], [0, 0, 0, 0]],
    [[0, 0, 1, 1], [1, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
    [[0, 0, 0, 0], [0, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, 1]],
    [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 1], [1, 1, 0, 0]],
    [[1, 0, 1, 0], [0, 0, 0, 0], [0, 1, 0, 1], [0, 0, 0, 0]],
    [[0, 1, 0, 1], [0, 0, 0, 0], [1, 0, 1, 0], [0, 0, 0, 0]],
    [[0, 0, 0, 0], [1, 0, 1, 0], [0, 0, 0, 0], [0, 1, 0, 1]],
    [[0, 0, 0, 0], [0, 1, 0, 1], [0, 0, 0, 0], [1, 0, 1, 0]],
]

_DET1_ROWS = [
    [1, 0, 0, 0, 0, 0, 0, 1],
    [0, 0, 1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0],
]

# entries are multiplied by 1/2
_EX1_ROWS = [
    [1, 0, 0, 0, 0, 0, 0, 1],
    [0, 0, 1, 0, 0, 1, 0, 0],
    [0, 0, 0, 1, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 1, 0],
    [0, 1, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 1, 1, 0, 0, 0],
    [0, 0, 1, 0, 0, 1, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 1],
]


def two_party_vertices() -> list[EnvironmentProcess]:
    """E_0 ... E_11 in printed order."""
    return [EnvironmentProcess(TWO_PARTY, RatMatrix.from_rows(r)) for r in _TWO_PARTY_ROWS]


def det1() -> EnvironmentProcess:
    return EnvironmentProcess(THREE_PARTY, RatMatrix.from_rows(_DET1_ROWS))


def det1_function() -> DeterministicFunction:
    """I_A = !O_B & O_C, I_B = O_A & !O_C, I_C = !O_A & O_B."""
    return DeterministicFunction.from_components(
        THREE_PARTY,
        lambda o: ((1 - o[1]) & o[2], o[0] & (1 - o[2]), (1 - o[0]) & o[1]))


def ex1() -> EnvironmentProcess:
    half = Fraction(1, 2)
    return EnvironmentProcess(
        THREE_PARTY, RatMatrix.from_rows([[half * x for x in r] for r in _EX1_ROWS]))


def circular_identity_function() -> DeterministicFunction:
    """I_A = O_C, I_B = O_A, I_C = O_B."""
    return DeterministicFunction.from_components(THREE_PARTY, lambda o: (o[2], o[0], o[1]))


def circular_flip_function() -> DeterministicFunction:
    """I_A = !O_C, I_B = !O_A, I_C = !O_B."""
    return DeterministicFunction.from_components(
        THREE_PARTY, lambda o: (1 - o[2], 1 - o[0], 1 - o[1]))


def chain_function() -> DeterministicFunction:
    """A receives 0, B receives O_A, C receives O_B."""
    return DeterministicFunction.from_components(THREE_PARTY, lambda o: (0, o[0], o[1]))


def negative_entry_matrix() -> RatMatrix:
    """One-party 2x2 candidate with a negative entry (columns still sum to 1)."""
    return RatMatrix.from_rows([[Fraction(-1, 2), 0], [Fraction(3, 2), 1]])


def _det_env(g: DeterministicFunction) -> EnvironmentProcess:
    from .scenario import det_function_to_process
    return det_function_to_process(g)


def fixture_files() -> dict[str, str]:
    """File name -> contents for everything shipped under ``data/``."""
    from .games import builtin_game, format_game_text

    files = {}
    for k, env in enumerate(two_party_vertices()):
        files[f"E{k}.txt"] = format_process_text(env.scenario, env.matrix,
                                                 f"two-party vertex E_{k}")
    files["E_ex1.txt"] = format_process_text(THREE_PARTY, ex1().matrix,
                                             "uniform mixture of circular identity and circular bit-flip")
    files["E_det1.txt"] = format_process_text(THREE_PARTY, det1().matrix,
                                              "I_A = !O_B O_C, I_B = O_A !O_C, I_C = !O_A O_B")
    files["circular_identity.txt"] = format_process_text(
        THREE_PARTY, _det_env(circular_identity_function()).matrix,
        "circular identity channel: I_A = O_C, I_B = O_A, I_C = O_B")
    files["circular_flip.txt"] = format_process_text(
        THREE_PARTY, _det_env(circular_flip_function()).matrix,
        "circular bit-flip channel: I_A = !O_C, I_B = !O_A, I_C = !O_B")
    files["chain.txt"] = format_process_text(
        THREE_PARTY, _det_env(chain_function()).matrix,
        "chain A -> B -> C with A receiving 0")
    files["negative_entry.txt"] = format_process_text(
        Scenario(1, 2), negative_entry_matrix(), "not a probability: entry (0,0) is negative")
    files["ex1.game"] = format_game_text(builtin_game("ex1"),
                                         "guess the parity of the other two inputs, selected by m")
    files["ex2.game"] = format_game_text(builtin_game("ex2"),
                                         "guess-your-neighbours-input with majority switch")
    return files


def data_path(name: str) -> Path:
    return Path(str(resources.files("acausal") / "data" / name))


def write_fixture_files(directory: Path | None = None) -> None:
    directory = Path(directory) if directory else Path(__file__).parent / "data"
    directory.mkdir(parents=True, exist_ok=True)
    for name, text in fixture_files().items():
        (directory / name).write_text(text)


if __name__ == "__main__":
    write_fixture_files()
