# app/plugin_loader.py

import importlib
import logging
from typing import Type, Union

from config import settings
from plugins.base_policy import BasePolicy
from app.arbiter_enums import Policy
from app.arbiter_logger import logger_names

module_logger = logging.getLogger(logger_names.PLUGIN_LOADER)

def load_policy_class(policy: Union[Policy, str]) -> Type[BasePolicy]:
    """
    Dynamically loads the policy class for the given policy name.

    The module name is built from the policy (e.g. Policy.SKIPSCAN becomes
    'plugins.policies.skipscan_policy'). The module is imported and the
    class named 'Policy' within it is returned.

    This approach ensures that the arbiter core does not need to be changed
    when new policies are added.
    """
    policy_name = str(policy).lower()
    module_name = f"{settings.POLICY_PLUGIN_PACKAGE}.{policy_name}_policy"
    try:
        # Dynamically import the module (e.g., plugins.policies.skipscan_policy)
        policy_module = importlib.import_module(module_name)

        # Convention: The main class in a plugin module must be named 'Policy'
        policy_class = getattr(policy_module, 'Policy')

    except ImportError as e:
        module_logger.error(
            "Could not import policy module: '%s'. Check if the file exists"
            + " and the policy name is correct.",
            module_name,
            exc_info = e
        )
        raise

    except AttributeError as e:
        module_logger.error(
            "Could not find a class named 'Policy' in module: '%s'. Please"
            + " ensure the plugin class is named correctly.",
            module_name,
            exc_info = e
        )
        raise

    # Ensure the loaded class is a valid policy
    if not (isinstance(policy_class, type)
            and issubclass(policy_class, BasePolicy)):
        module_logger.error(
            "Policy class in '%s' must inherit from BasePolicy",
            module_name,
        )
        raise TypeError(
            f"Policy class in '{module_name}' must inherit from BasePolicy"
        )

    module_logger.debug(
        "Successfully loaded policy: %s from %s",
        policy_class.__name__,
        module_name
    )
    return policy_class
