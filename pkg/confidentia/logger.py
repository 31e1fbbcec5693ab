import os
import logging

LOGLEVEL = os.environ.get('CONFIDENTIA_LOGLEVEL') if os.environ.get('CONFIDENTIA_LOGLEVEL') else 'CRITICAL'

levels_mapping = { 50: 'CRITICAL',
                   40: 'ERROR',
                   30: 'WARNING',
                   20: 'INFO',
                   10: 'DEBUG',
                    0: 'NOTSET'}


def setup(level=LOGLEVEL, force=False):
    """Setup the confidentia logger, with a single stream handler. Library modules only get their
    loggers, it is up to the application (i.e. the command line) or the tests to call this function."""
    level = level.upper()
    confidentia_logger = logging.getLogger('confidentia')
    configured = False
    for handler in confidentia_logger.handlers:
        if handler.get_name() == 'confidentia_handler':
            configured = True
            if force:
                handler.setLevel(level=level)
                confidentia_logger.setLevel(level=level)
            else:
                if levels_mapping[handler.level] != level:
                    confidentia_logger.warning('You tried to setup the logger with level "{}" but it is already configured with level "{}". Use force=True to force reconfiguring it.'.format(level, levels_mapping[handler.level]))

    if not configured:
        confidentia_handler = logging.StreamHandler()
        confidentia_handler.set_name('confidentia_handler')
        confidentia_handler.setLevel(level=level)
        confidentia_handler.setFormatter(logging.Formatter('[%(levelname)s] %(name)s: %(message)s'))
        confidentia_logger.addHandler(confidentia_handler)
        confidentia_logger.setLevel(level=level)
