from solitons.management.base import LabCommand


class Command(LabCommand):
    help = 'Verify the soliton equation and its identities for a catalog family or custom metric'
    mode = 'verify'
