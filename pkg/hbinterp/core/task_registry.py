"""
Registry of hbinterp tasks.

Discovers the task classes of the hbinterp.tasks package and resolves a
subcommand name to a task instance. Third-party modules can register more
tasks with load_plugin_task.
"""

import importlib
import inspect
import logging
import pkgutil
from types import ModuleType
from typing import Dict, List, Optional, Type

from hbinterp.core.task_base import TaskBase, TaskCategory


logger = logging.getLogger(__name__)


class TaskRegistry:
    """Centralized registry of the available tasks."""

    def __init__(self, load_builtin: bool = True) -> None:
        self._tasks: Dict[str, Type[TaskBase]] = {}
        self._instances: Dict[str, TaskBase] = {}
        if load_builtin:
            self._load_builtin_tasks()

    def register_task(self, task_class: Type[TaskBase]) -> None:
        """
        Registers a task class.

        Raises:
            ValueError: If the class does not derive from TaskBase
        """
        if not (inspect.isclass(task_class) and issubclass(task_class, TaskBase)):
            raise ValueError(f"{task_class} must inherit from TaskBase")

        name = task_class().name
        if name in self._tasks and self._tasks[name] is not task_class:
            logger.warning(f"Replacing task {name}: {self._tasks[name]} -> {task_class}")

        self._tasks[name] = task_class
        self._instances.pop(name, None)
        logger.debug(f"Task registered: {name} ({task_class.__name__})")

    def get_task(self, name: str) -> TaskBase:
        """
        Task instance for a subcommand name.

        Raises:
            ValueError: If no task has this name
        """
        if name not in self._tasks:
            available = ", ".join(sorted(self._tasks))
            raise ValueError(f"Task not found: {name}. Available tasks: {available}")
        if name not in self._instances:
            self._instances[name] = self._tasks[name]()
        return self._instances[name]

    def has_task(self, name: str) -> bool:
        return name in self._tasks

    def list_tasks(self) -> List[TaskBase]:
        return [self.get_task(name) for name in sorted(self._tasks)]

    def list_task_names(self) -> List[str]:
        return sorted(self._tasks)

    def list_tasks_by_category(self, category: str) -> List[TaskBase]:
        try:
            wanted = TaskCategory(category)
        except ValueError:
            logger.warning(f"Invalid category: {category}")
            return []
        return [task for task in self.list_tasks() if task.category == wanted]

    def get_task_info(self, name: str) -> Dict[str, object]:
        task = self.get_task(name)
        return {
            "name": task.name,
            "category": task.category.value,
            "description": task.description,
            "required": task.required_params,
            "inputs": task.input_params,
        }

    def _load_builtin_tasks(self) -> None:
        """Registers every task defined in the hbinterp.tasks modules."""
        import hbinterp.tasks

        for _, name, ispkg in pkgutil.iter_modules(hbinterp.tasks.__path__, hbinterp.tasks.__name__ + "."):
            if ispkg:
                continue
            try:
                self._register_tasks_from_module(importlib.import_module(name))
            except ImportError as e:
                logger.error(f"Error loading task module {name}: {e}")

    def _register_tasks_from_module(self, module: ModuleType) -> None:
        for _, attr in inspect.getmembers(module, inspect.isclass):
            if issubclass(attr, TaskBase) and not inspect.isabstract(attr) and attr.__module__ == module.__name__:
                self.register_task(attr)

    def load_plugin_task(self, module_path: str) -> None:
        """Registers the tasks of an external module (ex: 'my_package.my_tasks')."""
        module = importlib.import_module(module_path)
        self._register_tasks_from_module(module)
        logger.info(f"Task plugin loaded: {module_path}")

    def clear(self) -> None:
        """Empties the registry (useful in tests)."""
        self._tasks.clear()
        self._instances.clear()


_global_registry: Optional[TaskRegistry] = None


def get_global_registry() -> TaskRegistry:
    """Global task registry, created on first use."""
    global _global_registry
    if _global_registry is None:
        _global_registry = TaskRegistry()
    return _global_registry


def register_task(task_class: Type[TaskBase]) -> None:
    """Shortcut to register a task in the global registry."""
    get_global_registry().register_task(task_class)
