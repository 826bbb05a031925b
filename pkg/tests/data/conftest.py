import numpy as np
import pytest

from src.data.loaders import write_dense, write_labels


@pytest.fixture()
def task_matrix() -> np.ndarray:
    return np.array([[1.0, 0.0, 2.5, 0.0], [0.0, -3.0, 0.0, 0.125], [0.5, 0.0, 0.0, 1e-17]])


@pytest.fixture()
def dataset_dir(tmp_path, task_matrix):
    """Two dense labelled tasks plus a manifest, as a user would lay them out."""
    write_dense(tmp_path / "a.txt", task_matrix)
    write_dense(tmp_path / "b.txt", 2.0 * task_matrix[:, :3])
    write_labels(tmp_path / "a.labels", [0, 1, 0, 1])
    write_labels(tmp_path / "b.labels", [1, 1, 0])
    (tmp_path / "manifest.env").write_text(
        "# two small tasks\n"
        "d = 3\n"
        "c = 2\n"
        "task.0.data = a.txt\n"
        "task.0.labels = a.labels\n"
        "task.1.data = b.txt\n"
        "task.1.labels = b.labels\n"
    )
    return tmp_path
