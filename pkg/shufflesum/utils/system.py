import psutil

from ..setup.config import Config


def get_core_count() -> int:
    """
    Get the number of CPU cores available for parallel experiment chunks. Two logical cores are left free.

    Returns:
        (int): num_cores. The number of available CPU cores, at least 1.
    """
    n_threads = psutil.cpu_count(logical=True)
    if n_threads is None:
        return 1
    return int(min(max(n_threads - 2, 1), 999))


def resolve_n_jobs(n_jobs: int | None = None) -> int:
    """
    Get the joblib worker count. An explicit value wins, then the `[parallel]` config default, then the core count.

    Args:
        n_jobs (int or none, optional): explicit worker count. Default: from config or the core count.

    Returns:
        (int): n_jobs. Positive worker count.
    """
    if n_jobs is None:
        n_jobs = Config.get_default_for("parallel", "n_jobs")
    if n_jobs is None:
        n_jobs = get_core_count()
    assert type(n_jobs) is int
    if n_jobs < 1:
        raise ValueError(f"n_jobs must be positive, got {n_jobs}")
    return n_jobs
