# Core config, logging, domain models, errors and file formats.
