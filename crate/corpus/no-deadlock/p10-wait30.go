// pattern: P10 wait30
// expected: no-deadlock
package main

import (
	"fmt"
	"time"
)

func main() {
	<-time.After(30 * time.Millisecond)
	fmt.Println("done")
}
