from typing import Any


class ConfigSection:
    """
    One section of a loaded configuration, for example `[enumeration]`.

    Values are stored already formatted and checked by `Config`.

    Attributes:
        name (str): the name of the config section.
    """

    name: str

    _values: dict[str, Any]

    def __init__(self, name: str, values: dict[str, Any]) -> None:
        assert type(name) is str
        assert type(values) is dict
        assert all([type(param_name) is str for param_name in values.keys()])
        assert len(values) > 0, "A config section needs at least one parameter"

        self.name = name
        self._values = dict(values)

    def __getitem__(self, param_name: str) -> Any:
        if type(param_name) is not str:
            raise TypeError(f"Config parameters are read by name, got {type(param_name)}")
        if param_name not in self._values:
            raise ValueError(f"No parameter {param_name} in config section {self.name}")

        return self._values[param_name]

    def __setitem__(self, param_name: str, value: Any, /) -> None:
        """
        Overwrite a parameter, for example from a command line flag.
        """
        assert type(param_name) is str
        assert param_name in self._values, f"Cannot add new parameter {param_name} to section {self.name}"

        self._values[param_name] = value

    def __contains__(self, param_name: object) -> bool:
        return param_name in self._values

    def get_parameter_names(self) -> list[str]:
        return list(self._values.keys())

    def to_dict(self) -> dict[str, Any]:
        return self._values.copy()
