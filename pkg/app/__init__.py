import logging
import os
import sys
from logging.handlers import RotatingFileHandler

from flask import Flask

LOG_FORMAT = '%(asctime)s %(levelname)s: %(message)s [in %(pathname)s:%(lineno)d]'


def configure_logging(config, logger=None):
    """
    Sends the records of the pycylinder loggers (and of `logger`, when given)
    to stderr if LOG_TO_STDOUT is set, otherwise to a rotating file under LOG_DIR.
    """
    level = getattr(logging, str(config.get('LOG_LEVEL', 'INFO')).upper(), logging.INFO)

    if config.get('LOG_TO_STDOUT'):
        handler = logging.StreamHandler(sys.stderr)
    else:
        log_dir = config.get('LOG_DIR', 'logs')
        if not os.path.exists(log_dir):
            os.mkdir(log_dir)
        handler = RotatingFileHandler(os.path.join(log_dir, 'pycylinder.log'), maxBytes=10240, backupCount=10)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler.setLevel(level)

    targets = [logging.getLogger('pycylinder'), logging.getLogger('app')]
    if logger is not None:
        targets.append(logger)
    for target in targets:
        for previous in [h for h in target.handlers if getattr(h, '_pycylinder', False)]:
            target.removeHandler(previous)
        handler._pycylinder = True
        target.addHandler(handler)
        target.setLevel(level)
    return handler


def config_dict(app_config):
    return {key: getattr(app_config, key) for key in dir(app_config) if key.isupper()}


def create_app(app_config=None):
    app = Flask(__name__, instance_relative_config=False)

    if app_config is None:
        from app.config import Config
        app_config = Config
    app.config.from_object(app_config)

    configure_logging(app.config, app.logger)
    app.logger.info('---------- Initializing pycylinder verification API ----------')

    from app.api import verify
    verify.init_app(app)

    from app.cli import cli
    app.cli.add_command(cli, 'verify')

    return app
