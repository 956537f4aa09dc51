from ..setup.config import Config


class BudgetExceededError(ValueError):
    pass


def check_budget(state_count: int, budget: int | None, what: str, section: str = "enumeration") -> int:
    """
    Raise if an exact computation would visit more states than allowed.

    Args:
        state_count (int): number of elementary states the computation visits.
        budget (int or none): the allowed maximum. Default: the `budget` parameter of the config `section`.
        what (str): a short description used in the error message.
        section (str, optional): config section holding the default budget. Default: "enumeration".

    Returns:
        (int): budget. The budget that was applied.
    """
    if budget is None:
        budget = Config.get_default_for(section, "budget")
    assert type(budget) is int
    if state_count > budget:
        raise BudgetExceededError(f"{what} needs {state_count} states, above the budget of {budget}")
    return budget
