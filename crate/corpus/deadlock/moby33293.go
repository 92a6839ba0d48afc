// source: moby#33293 (minimal reconstruction)
// expected: deadlock
//
// The waiter only reports on the error channel when the container
// exits abnormally; the caller always waits for a report.
package main

import "errors"

func wait(errCh chan error, exitedCleanly bool) {
	if !exitedCleanly {
		errCh <- errors.New("container exited")
	}
}

func main() {
	errCh := make(chan error)
	go wait(errCh, true)
	<-errCh
}
