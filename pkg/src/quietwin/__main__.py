from quietwin.cli.app import app
from quietwin.constants import DOTENV_FILES, ENV_PREFIX
from quietwin.utils.load_app_dotenv import load_app_dotenv


def main():
    load_app_dotenv(*DOTENV_FILES, prefix=ENV_PREFIX, override=True)
    app()


if __name__ == "__main__":
    main()
